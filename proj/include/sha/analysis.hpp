// SPDX-License-Identifier: Apache-2.0
// sha-toolkit: spatial-to-spectral harmonic-modulated array modelling

#ifndef SHA_ANALYSIS_HPP
#define SHA_ANALYSIS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sha/architecture.hpp"
#include "sha/waveform.hpp"

namespace sha {

// |AF_m(theta)| over a grid, for one harmonic. peak_theta_deg is the grid
// argmax refined by parabolic interpolation of the three surrounding points.
struct PatternSlice {
    int m = 0;
    std::vector<double> theta_deg;
    std::vector<double> magnitude;
    double peak_theta_deg = 0.0;
};

inline std::vector<double> uniform_theta_grid(double step_deg = 0.05, double lo_deg = -90.0,
                                              double hi_deg = 90.0) {
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor((hi_deg - lo_deg) / step_deg + 0.5));
    g.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.push_back(lo_deg + static_cast<double>(i) * step_deg);
    return g;
}

// AF_m(theta) = | sum_n w_{n,m} exp(-j n 2 pi d sin(theta)) |.
inline PatternSlice array_factor(const ArchitectureConfig& cfg, const ChannelControls& ctl,
                                 int m, const std::vector<double>& theta_grid_deg) {
    if (theta_grid_deg.empty())
        throw std::invalid_argument("array_factor: empty theta grid");

    // Per-channel weights at harmonic m only.
    std::vector<cplx> wm(cfg.n_channels);
    for (std::size_t n = 0; n < cfg.n_channels; ++n)
        wm[n] = channel_weights(cfg, ctl, n).at(m);

    PatternSlice out;
    out.m = m;
    out.theta_deg = theta_grid_deg;
    out.magnitude.resize(theta_grid_deg.size());

    std::size_t best = 0;
    for (std::size_t i = 0; i < theta_grid_deg.size(); ++i) {
        const double th = deg2rad(theta_grid_deg[i]);
        const cplx u = std::polar(1.0, -two_pi * cfg.spacing_d * std::sin(th));
        cplx acc(0.0, 0.0);
        cplx rot(1.0, 0.0);
        for (std::size_t n = 0; n < cfg.n_channels; ++n) {
            acc += wm[n] * rot;
            rot *= u;
        }
        out.magnitude[i] = std::abs(acc);
        if (out.magnitude[i] > out.magnitude[best]) best = i;
    }

    out.peak_theta_deg = out.theta_deg[best];
    if (best > 0 && best + 1 < out.magnitude.size()) {
        // Parabolic vertex through the three points around the grid max.
        const double y0 = out.magnitude[best - 1];
        const double y1 = out.magnitude[best];
        const double y2 = out.magnitude[best + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (std::abs(denom) > 1e-30) {
            double delta = 0.5 * (y0 - y2) / denom;
            if (delta > 0.5) delta = 0.5;
            if (delta < -0.5) delta = -0.5;
            out.peak_theta_deg += delta * (out.theta_deg[best] - out.theta_deg[best - 1]);
        }
    }
    return out;
}

// Per-harmonic gain figures. ag = g_sig / g_noise wherever the coefficient is
// nonzero; harmonics with beta_m = 0 are reported with zero gains and the
// ag_defined flag cleared.
struct GainEntry {
    int m = 0;
    double f_m_hz = 0.0;
    double g_sig = 0.0;
    double g_noise = 0.0;
    double ag = std::numeric_limits<double>::quiet_NaN();
    bool ag_defined = false;
};

struct GainReport {
    std::vector<GainEntry> entries;
    double harmonic_loss = 0.0; // fraction of LO power outside the used harmonics

    const GainEntry* find(int m) const {
        for (const auto& e : entries)
            if (e.m == m) return &e;
        return nullptr;
    }
};

// Closed-form gains: g_sig = N^2 |beta_m|^2, g_noise = N |beta_m|^2, so
// ag = N independent of the waveform. Gains do not depend on the controls
// (phase-only weights); the controls are validated for contract consistency.
// combining_loss_db > 0 derates signal and noise alike, leaving ag intact.
inline GainReport gain_report(const ArchitectureConfig& cfg, const ChannelControls& ctl,
                              const std::vector<int>& used_harmonics,
                              double combining_loss_db = 0.0) {
    if (used_harmonics.empty())
        throw std::invalid_argument("gain_report: used harmonic set must be nonempty");
    validate_controls(cfg.kind, ctl);
    const double loss_lin = db2lin(-combining_loss_db);

    GainReport out;
    out.entries.reserve(used_harmonics.size());
    double used_power = 0.0;
    for (int m : used_harmonics) {
        GainEntry e;
        e.m = m;
        e.f_m_hz = cfg.f_rf_hz + m * cfg.waveform.f_hm_hz();
        const cplx b = cfg.waveform.beta(m);
        e.g_sig = loss_lin * signal_power_gain(cfg.n_channels, b);
        e.g_noise = loss_lin * noise_power_gain(cfg.n_channels, b);
        if (e.g_noise > 0.0) {
            e.ag = e.g_sig / e.g_noise;
            e.ag_defined = true;
        }
        used_power += std::norm(b);
        out.entries.push_back(e);
    }
    out.harmonic_loss = 1.0 - used_power / cfg.waveform.total_power();
    return out;
}

// The K comb harmonics: symmetric about 0 for odd K; for even K the extra
// harmonic goes to the negative side, m in {-K/2, ..., K/2 - 1}.
inline std::vector<int> comb_harmonics(int k) {
    if (k < 1) throw std::invalid_argument("comb_harmonics: K must be >= 1");
    std::vector<int> h;
    h.reserve(static_cast<std::size_t>(k));
    const int lo = (k % 2 == 1) ? -(k - 1) / 2 : -k / 2;
    for (int m = lo; m < lo + k; ++m) h.push_back(m);
    return h;
}

// Square-vs-comb comparison at fixed LO power. The square wave is the duty
// 1/N modulation; its amplitude is chosen so the power of the untruncated
// pulse train (duty * A^2) equals fixed_power, i.e. the power budget refers
// to the physical waveform, with the truncation tail counted as lost.
struct ComparisonRow {
    int k = 0;
    double g_sig_square_m0 = 0.0;
    double g_sig_comb_m0 = 0.0;
    std::vector<int> used;
    std::vector<double> g_sig_square;
    std::vector<double> g_sig_comb;
};

struct WaveformComparison {
    std::size_t n_channels = 0;
    double fixed_power = 0.0;
    std::vector<ComparisonRow> rows;
};

inline WaveformComparison compare_waveforms(std::size_t n_channels, const std::vector<int>& k_values,
                                            double fixed_power, double f_hm_hz = 1e9) {
    if (n_channels < 2)
        throw std::invalid_argument("compare_waveforms: n_channels must be >= 2");
    if (!(fixed_power > 0.0))
        throw std::invalid_argument("compare_waveforms: fixed_power must be > 0");

    const double duty = 1.0 / static_cast<double>(n_channels);
    const HarmonicWaveform square =
        HarmonicWaveform::square(duty, std::sqrt(fixed_power / duty), f_hm_hz);

    WaveformComparison out;
    out.n_channels = n_channels;
    out.fixed_power = fixed_power;
    out.rows.reserve(k_values.size());
    for (int k : k_values) {
        ComparisonRow row;
        row.k = k;
        row.used = comb_harmonics(k);
        const HarmonicWaveform comb = HarmonicWaveform::comb(row.used, fixed_power, f_hm_hz);
        for (int m : row.used) {
            row.g_sig_square.push_back(signal_power_gain(n_channels, square.beta(m)));
            row.g_sig_comb.push_back(signal_power_gain(n_channels, comb.beta(m)));
        }
        row.g_sig_square_m0 = signal_power_gain(n_channels, square.beta(0));
        row.g_sig_comb_m0 = signal_power_gain(n_channels, comb.beta(0));
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace sha

#endif // SHA_ANALYSIS_HPP
