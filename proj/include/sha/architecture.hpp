// SPDX-License-Identifier: Apache-2.0
// sha-toolkit: spatial-to-spectral harmonic-modulated array modelling

#ifndef SHA_ARCHITECTURE_HPP
#define SHA_ARCHITECTURE_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sha/waveform.hpp"

namespace sha {

// Array architectures, by their tunable progressive controls:
//   tma      -- square-wave modulation, delay fixed at T_hm/N, nothing tunable
//   hma      -- arbitrary waveform, tunable LO-path delay d_tau
//   hmjpta2  -- hma plus an RF-path phase shifter d_phi_rf
//   hmjpta3  -- mixer-output delay d_tau, RF phase d_phi_rf, LO phase d_phi_lo
enum class ArchKind { tma, hma, hmjpta2, hmjpta3 };

inline const char* to_string(ArchKind k) {
    switch (k) {
        case ArchKind::tma: return "tma";
        case ArchKind::hma: return "hma";
        case ArchKind::hmjpta2: return "hmjpta2";
        case ArchKind::hmjpta3: return "hmjpta3";
    }
    return "?";
}

inline ArchKind arch_kind_from_string(const std::string& s) {
    if (s == "tma") return ArchKind::tma;
    if (s == "hma") return ArchKind::hma;
    if (s == "hmjpta2") return ArchKind::hmjpta2;
    if (s == "hmjpta3") return ArchKind::hmjpta3;
    throw std::invalid_argument("unknown architecture kind '" + s + "'");
}

struct invalid_control_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Progressive channel-to-channel control increments. Controls a kind does not
// support must be exactly zero.
struct ChannelControls {
    double d_tau_s = 0.0;
    double d_phi_rf_rad = 0.0;
    double d_phi_lo_rad = 0.0;
};

inline void validate_controls(ArchKind kind, const ChannelControls& ctl) {
    const auto require_zero = [&](double v, const char* name) {
        if (v != 0.0)
            throw invalid_control_error(std::string(name) + " is not supported by architecture " +
                                        to_string(kind) + " and must be exactly zero");
    };
    switch (kind) {
        case ArchKind::tma:
            require_zero(ctl.d_tau_s, "d_tau");
            require_zero(ctl.d_phi_rf_rad, "d_phi_rf");
            require_zero(ctl.d_phi_lo_rad, "d_phi_lo");
            break;
        case ArchKind::hma:
            require_zero(ctl.d_phi_rf_rad, "d_phi_rf");
            require_zero(ctl.d_phi_lo_rad, "d_phi_lo");
            break;
        case ArchKind::hmjpta2:
            require_zero(ctl.d_phi_lo_rad, "d_phi_lo");
            break;
        case ArchKind::hmjpta3:
            break;
    }
}

// Uniform linear array driven by per-channel copies of one HM-LO waveform.
// spacing_d is the element spacing in carrier wavelengths.
struct ArchitectureConfig {
    ArchKind kind = ArchKind::hma;
    std::size_t n_channels = 2;
    double spacing_d = 0.5;
    double f_rf_hz = 0.0;
    double f_bw_hz = 0.0;
    double f_tr_hz = 0.0;
    HarmonicWaveform waveform;

    // The TMA's fixed progressive delay T_hm / N.
    double tma_delay_s() const {
        return waveform.period_s() / static_cast<double>(n_channels);
    }

    void validate() const {
        if (n_channels < 2)
            throw std::invalid_argument("architecture: n_channels must be >= 2");
        if (!(spacing_d > 0.0))
            throw std::invalid_argument("architecture: spacing_d must be > 0");
        if (!(f_rf_hz > 0.0))
            throw std::invalid_argument("architecture: f_rf_hz must be > 0");
        if (f_bw_hz < 0.0 || f_tr_hz < 0.0)
            throw std::invalid_argument("architecture: bandwidths must be >= 0");
        if (kind == ArchKind::tma) validate_tma_waveform();
    }

    static ArchitectureConfig tma(std::size_t n, double f_rf_hz, double f_hm_hz,
                                  double spacing_d = 0.5, int m_max = 0) {
        ArchitectureConfig cfg{ArchKind::tma,
                               n,
                               spacing_d,
                               f_rf_hz,
                               0.0,
                               0.0,
                               HarmonicWaveform::square(1.0 / static_cast<double>(n), 1.0,
                                                        f_hm_hz, m_max)};
        cfg.validate();
        return cfg;
    }

private:
    // The TMA is defined by its duty-1/N square wave; reject configs whose
    // waveform is something else.
    void validate_tma_waveform() const {
        const double duty = 1.0 / static_cast<double>(n_channels);
        if (!waveform.real_valued())
            throw std::invalid_argument("tma: waveform must be a real duty-1/N square wave");
        const double b0 = waveform.beta(0).real();
        if (!(b0 > 0.0))
            throw std::invalid_argument("tma: waveform must be a unipolar duty-1/N square wave");
        const double amplitude = b0 / duty;
        for (int m = 1; m <= waveform.m_max(); ++m) {
            const double md = m * duty;
            double expect = 0.0;
            if (std::abs(md - std::round(md)) >= 1e-12)
                expect = amplitude * std::sin(pi * md) / (pi * m);
            if (std::abs(waveform.beta(m).real() - expect) > 1e-9 * amplitude ||
                std::abs(waveform.beta(m).imag()) > 1e-9 * amplitude)
                throw std::invalid_argument("tma: waveform is not a duty-1/N square wave");
        }
    }
};

// Progressive phase at each harmonic: raw value and its wrap into (-pi, pi].
struct PhaseEntry {
    int m = 0;
    double f_m_hz = 0.0;
    double d_phi_rad = 0.0;
    double d_phi_wrapped_rad = 0.0;
};

struct PhaseProfile {
    std::vector<PhaseEntry> entries;

    const PhaseEntry* find(int m) const {
        for (const auto& e : entries)
            if (e.m == m) return &e;
        return nullptr;
    }
};

// Wrap a phase into (-pi, pi].
inline double wrap_phase(double x) {
    double w = std::remainder(x, two_pi);
    if (w <= -pi) w += two_pi;
    return w;
}

// Progressive phase-frequency profile of an architecture.
//
// Sign convention, used everywhere in this library: positive d_tau produces a
// positive progressive phase at positive harmonics, i.e. channel n leads
// channel 0 by n * d_phi(f_m). Equivalently, channel n's waveform copy is
// advanced by n * d_tau.
//
//   tma:      d_phi(f_m) = 2 pi m f_hm (T_hm / N)
//   hma:      d_phi(f_m) = 2 pi m f_hm d_tau
//   hmjpta2:  d_phi(f_m) = 2 pi m f_hm d_tau + d_phi_rf
//   hmjpta3:  d_phi(f_m) = 2 pi (f_rf + m f_hm) d_tau + d_phi_rf + sgn(m) d_phi_lo
//
// The hmjpta3 mixer-output delay acts at the translated carrier, which is why
// f_rf enters; its LO phase shifter contributes nothing at m = 0.
inline PhaseProfile phase_profile(const ArchitectureConfig& cfg, const ChannelControls& ctl,
                                  const std::vector<int>& harmonics) {
    validate_controls(cfg.kind, ctl);
    const double f_hm = cfg.waveform.f_hm_hz();
    PhaseProfile out;
    out.entries.reserve(harmonics.size());
    for (int m : harmonics) {
        double phi = 0.0;
        switch (cfg.kind) {
            case ArchKind::tma:
                phi = two_pi * m * f_hm * cfg.tma_delay_s();
                break;
            case ArchKind::hma:
                phi = two_pi * m * f_hm * ctl.d_tau_s;
                break;
            case ArchKind::hmjpta2:
                phi = two_pi * m * f_hm * ctl.d_tau_s + ctl.d_phi_rf_rad;
                break;
            case ArchKind::hmjpta3:
                phi = two_pi * (cfg.f_rf_hz + m * f_hm) * ctl.d_tau_s + ctl.d_phi_rf_rad +
                      sgn(m) * ctl.d_phi_lo_rad;
                break;
        }
        out.entries.push_back({m, cfg.f_rf_hz + m * f_hm, phi, wrap_phase(phi)});
    }
    return out;
}

// Channel n's harmonic weights w_{n,m} = beta_m exp(j n d_phi(f_m)).
inline ChannelCoefficients channel_weights(const ArchitectureConfig& cfg,
                                           const ChannelControls& ctl, std::size_t channel) {
    if (channel >= cfg.n_channels)
        throw std::invalid_argument("channel_weights: channel index out of range");
    const int m_max = cfg.waveform.m_max();
    std::vector<int> all;
    all.reserve(static_cast<std::size_t>(2 * m_max + 1));
    for (int m = -m_max; m <= m_max; ++m) all.push_back(m);
    const PhaseProfile prof = phase_profile(cfg, ctl, all);

    ChannelCoefficients out;
    out.channel = channel;
    out.f_hm_hz = cfg.waveform.f_hm_hz();
    out.m_max = m_max;
    out.w.resize(static_cast<std::size_t>(2 * m_max + 1));
    const double n = static_cast<double>(channel);
    for (int m = -m_max; m <= m_max; ++m)
        out.w[static_cast<std::size_t>(m + m_max)] =
            cfg.waveform.beta(m) * std::polar(1.0, n * prof.entries[static_cast<std::size_t>(
                                                       m + m_max)].d_phi_rad);
    return out;
}

// Linear signal power gain N^2 |beta_m|^2 of the beam at harmonic m
// (coherent voltage summation across N channels, lossless combining).
inline double signal_power_gain(std::size_t n_channels, cplx beta_m) {
    const double n = static_cast<double>(n_channels);
    return n * n * std::norm(beta_m);
}

// Noise power gain N |beta_m|^2 (uncorrelated channel noise sums in power).
inline double noise_power_gain(std::size_t n_channels, cplx beta_m) {
    return static_cast<double>(n_channels) * std::norm(beta_m);
}

// Angle-frequency map: beam m points at sin(theta_m) = d_phi_wrapped / (2 pi d).
// Entries whose wrapped phase implies |sin| > 1 carry no angle (invisible).
struct BeamEntry {
    int m = 0;
    double f_m_hz = 0.0;
    std::optional<double> theta_deg; // nullopt = invisible
    double d_phi_rad = 0.0;
    double d_phi_wrapped_rad = 0.0;
    double g_sig_db = 0.0; // -inf for a zero coefficient
};

struct BeamMap {
    std::vector<BeamEntry> entries;

    const BeamEntry* find(int m) const {
        for (const auto& e : entries)
            if (e.m == m) return &e;
        return nullptr;
    }
};

inline BeamMap beam_map(const ArchitectureConfig& cfg, const ChannelControls& ctl,
                        const std::vector<int>& harmonics) {
    const PhaseProfile prof = phase_profile(cfg, ctl, harmonics);
    BeamMap out;
    out.entries.reserve(prof.entries.size());
    for (const auto& p : prof.entries) {
        BeamEntry e;
        e.m = p.m;
        e.f_m_hz = p.f_m_hz;
        e.d_phi_rad = p.d_phi_rad;
        e.d_phi_wrapped_rad = p.d_phi_wrapped_rad;
        const double s = p.d_phi_wrapped_rad / (two_pi * cfg.spacing_d);
        if (std::abs(s) <= 1.0) e.theta_deg = rad2deg(std::asin(s));
        e.g_sig_db = lin2db(signal_power_gain(cfg.n_channels, cfg.waveform.beta(p.m)));
        out.entries.push_back(e);
    }
    return out;
}

// Band spacing rule: harmonic bands stay disjoint iff f_hm > f_bw + f_tr.
struct BandwidthCheck {
    bool pass = false;
    double margin_hz = 0.0;
};

inline BandwidthCheck validate_bandwidth(double f_hm_hz, double f_bw_hz, double f_tr_hz) {
    if (f_hm_hz < 0.0 || f_bw_hz < 0.0 || f_tr_hz < 0.0)
        throw std::invalid_argument("validate_bandwidth: frequencies must be >= 0");
    const double margin = f_hm_hz - (f_bw_hz + f_tr_hz);
    return {margin > 0.0, margin};
}

// LO distribution network must pass M_eff * f_hm; circuits after the mixer
// must span all harmonic bands, 2 * M_eff * f_hm around the carrier.
struct RequiredBandwidths {
    double lo_network_bw_hz = 0.0;
    double output_span_hz = 0.0;
};

inline RequiredBandwidths required_bandwidths(const HarmonicWaveform& w, double /*f_rf_hz*/) {
    const int m_eff = w.max_nonzero_harmonic();
    return {m_eff * w.f_hm_hz(), 2.0 * m_eff * w.f_hm_hz()};
}

} // namespace sha

#endif // SHA_ARCHITECTURE_HPP
