// SPDX-License-Identifier: Apache-2.0
// sha-toolkit: spatial-to-spectral harmonic-modulated array modelling

#ifndef SHA_WAVEFORM_HPP
#define SHA_WAVEFORM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sha {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// sgn with sgn(0) = 0. A wideband phase shifter at an LO port adds +phi to
// positive harmonics, -phi to negative harmonics and nothing at DC.
constexpr int sgn(int m) noexcept { return (m > 0) - (m < 0); }

constexpr double deg2rad(double deg) noexcept { return deg * pi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / pi; }

inline double lin2db(double x) { return 10.0 * std::log10(x); }
inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }

// One channel's phase/time-shifted copy of the modulation waveform,
// as the dense coefficient set w_{n,m}, |m| <= m_max. Magnitudes always
// equal the source coefficients (phase-only modifications, losses ignored).
struct ChannelCoefficients {
    std::size_t channel = 0;
    double f_hm_hz = 0.0;
    int m_max = 0;
    std::vector<cplx> w; // dense, index m + m_max

    cplx at(int m) const {
        if (m < -m_max || m > m_max) return {0.0, 0.0};
        return w[static_cast<std::size_t>(m + m_max)];
    }
};

// Periodic harmonic-modulation LO waveform held as a finite complex Fourier
// series a(t) = sum_{|m| <= M} beta_m exp(j 2 pi m f_hm t).
//
// Coefficients are stored densely over -M..M, explicit zeros included; M is
// small in practice so simplicity beats sparsity. Instances are immutable
// after construction and safe to share across threads.
class HarmonicWaveform {
public:
    enum class CombPhase { zero, conjugate_symmetric_random };

    // Unipolar 0/1 pulse train of the given duty cycle, centred at t = 0,
    // truncated at m_max:
    //   beta_0 = amplitude * duty
    //   beta_m = amplitude * sin(pi m duty) / (pi m),  m != 0
    // Harmonics where m*duty is an integer are exact spectral nulls.
    // m_max = 0 selects the default 4 * ceil(1/duty). The bipolar variant
    // switches between -amplitude and +amplitude instead of 0 and amplitude.
    static HarmonicWaveform square(double duty, double amplitude, double f_hm_hz,
                                   int m_max = 0, bool bipolar = false) {
        if (!(duty > 0.0) || duty > 1.0)
            throw std::invalid_argument("square waveform: duty must be in (0, 1]");
        if (!(amplitude > 0.0))
            throw std::invalid_argument("square waveform: amplitude must be > 0");
        check_f_hm(f_hm_hz);
        if (m_max == 0) m_max = 4 * static_cast<int>(std::ceil(1.0 / duty));
        if (m_max < 1)
            throw std::invalid_argument("square waveform: m_max must be >= 1");

        std::vector<cplx> c(static_cast<std::size_t>(2 * m_max + 1));
        for (int m = -m_max; m <= m_max; ++m) {
            double v;
            if (m == 0) {
                v = amplitude * duty;
                if (bipolar) v = amplitude * (2.0 * duty - 1.0);
            } else {
                const double md = m * duty;
                if (std::abs(md - std::round(md)) < 1e-12) {
                    v = 0.0; // exact spectral null
                } else {
                    v = amplitude * std::sin(pi * md) / (pi * m);
                    if (bipolar) v *= 2.0;
                }
            }
            c[static_cast<std::size_t>(m + m_max)] = cplx(v, 0.0);
        }
        return HarmonicWaveform(f_hm_hz, m_max, std::move(c), true);
    }

    // Comb-like waveform: |beta_m|^2 = total_power / |harmonics| at each
    // requested harmonic, zero elsewhere. Phases are zero by default; the
    // random scheme draws conjugate-symmetric phases (seeded) when the
    // harmonic set is symmetric about 0, independent phases otherwise.
    static HarmonicWaveform comb(std::vector<int> harmonics, double total_power,
                                 double f_hm_hz, CombPhase scheme = CombPhase::zero,
                                 std::uint64_t seed = 0) {
        if (harmonics.empty())
            throw std::invalid_argument("comb waveform: harmonic set must be nonempty");
        if (!(total_power > 0.0))
            throw std::invalid_argument("comb waveform: total_power must be > 0");
        check_f_hm(f_hm_hz);
        std::sort(harmonics.begin(), harmonics.end());
        harmonics.erase(std::unique(harmonics.begin(), harmonics.end()), harmonics.end());

        const int m_max = std::max(std::abs(harmonics.front()), std::abs(harmonics.back()));
        const double mag = std::sqrt(total_power / static_cast<double>(harmonics.size()));
        std::vector<cplx> c(static_cast<std::size_t>(2 * m_max + 1));

        const bool symmetric = std::all_of(harmonics.begin(), harmonics.end(), [&](int m) {
            return std::binary_search(harmonics.begin(), harmonics.end(), -m);
        });

        bool real_valued = symmetric;
        if (scheme == CombPhase::zero) {
            for (int m : harmonics) c[static_cast<std::size_t>(m + m_max)] = cplx(mag, 0.0);
        } else {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> phase(-pi, pi);
            if (symmetric) {
                for (int m : harmonics) {
                    if (m < 0) continue;
                    const double ph = (m == 0) ? 0.0 : phase(rng);
                    c[static_cast<std::size_t>(m + m_max)] = std::polar(mag, ph);
                    if (m > 0) c[static_cast<std::size_t>(-m + m_max)] = std::polar(mag, -ph);
                }
            } else {
                for (int m : harmonics)
                    c[static_cast<std::size_t>(m + m_max)] = std::polar(mag, phase(rng));
                real_valued = false;
            }
        }
        return HarmonicWaveform(f_hm_hz, m_max, std::move(c), real_valued);
    }

    // Arbitrary waveform from explicit (m, beta_m) pairs. real_valued is
    // detected from conjugate symmetry; require_real turns a violation into
    // an error instead.
    static HarmonicWaveform from_coefficients(double f_hm_hz,
                                              const std::vector<std::pair<int, cplx>>& coeffs,
                                              bool require_real = false) {
        check_f_hm(f_hm_hz);
        if (coeffs.empty())
            throw std::invalid_argument("waveform: coefficient list must be nonempty");
        int m_max = 0;
        for (const auto& [m, b] : coeffs) m_max = std::max(m_max, std::abs(m));
        std::vector<cplx> c(static_cast<std::size_t>(2 * m_max + 1));
        std::vector<bool> seen(c.size(), false);
        for (const auto& [m, b] : coeffs) {
            const auto i = static_cast<std::size_t>(m + m_max);
            if (seen[i])
                throw std::invalid_argument("waveform: duplicate coefficient for m = " +
                                            std::to_string(m));
            seen[i] = true;
            c[i] = b;
        }
        const bool symmetric = is_conjugate_symmetric(c, m_max);
        if (require_real && !symmetric)
            throw std::invalid_argument(
                "waveform: coefficients violate conjugate symmetry required for a "
                "real-valued waveform");
        return HarmonicWaveform(f_hm_hz, m_max, std::move(c), symmetric);
    }

    double f_hm_hz() const { return f_hm_hz_; }
    double period_s() const { return 1.0 / f_hm_hz_; }
    int m_max() const { return m_max_; }
    bool real_valued() const { return real_valued_; }

    cplx beta(int m) const {
        if (m < -m_max_ || m > m_max_) return {0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(m + m_max_)];
    }

    const std::vector<cplx>& coefficients() const { return coeffs_; }

    // Largest |m| with beta_m != 0 (exact test; constructors store clean
    // zeros at spectral nulls).
    int max_nonzero_harmonic() const {
        int mx = 0;
        for (int m = -m_max_; m <= m_max_; ++m)
            if (beta(m) != cplx(0.0, 0.0)) mx = std::max(mx, std::abs(m));
        return mx;
    }

    std::vector<int> nonzero_harmonics() const {
        std::vector<int> out;
        for (int m = -m_max_; m <= m_max_; ++m)
            if (beta(m) != cplx(0.0, 0.0)) out.push_back(m);
        return out;
    }

    // sum_m |beta_m|^2; by Parseval the mean of |a(t)|^2 over one period.
    double total_power() const {
        double p = 0.0;
        for (const cplx& b : coeffs_) p += std::norm(b);
        return p;
    }

    // Uniformly rescaled copy with the requested total power; phases and the
    // real_valued property are unchanged.
    HarmonicWaveform normalized(double target_power) const {
        if (!(target_power > 0.0))
            throw std::invalid_argument("normalize: target power must be > 0");
        const double p = total_power();
        if (!(p > 0.0))
            throw std::invalid_argument("normalize: waveform has zero power");
        const double s = std::sqrt(target_power / p);
        std::vector<cplx> c(coeffs_);
        for (cplx& b : c) b *= s;
        return HarmonicWaveform(f_hm_hz_, m_max_, std::move(c), real_valued_);
    }

    // Truncated Fourier sum at time t.
    cplx eval(double t_s) const {
        cplx acc(0.0, 0.0);
        // Rotate once per step instead of calling polar 2M+1 times.
        const cplx step = std::polar(1.0, two_pi * f_hm_hz_ * t_s);
        cplx rot = std::polar(1.0, two_pi * f_hm_hz_ * t_s * -m_max_);
        for (int m = -m_max_; m <= m_max_; ++m) {
            acc += beta(m) * rot;
            rot *= step;
        }
        return acc;
    }

    // Channel copy w_{n,m} = beta_m exp(-j 2 pi m f_hm n tau) exp(+j n phi_lo sgn(m)):
    // a progressive pure delay of n*tau plus an optional LO-port phase shift.
    ChannelCoefficients shifted_copy(std::size_t channel, double tau_s,
                                     double phi_lo_rad = 0.0) const {
        ChannelCoefficients out;
        out.channel = channel;
        out.f_hm_hz = f_hm_hz_;
        out.m_max = m_max_;
        out.w.resize(coeffs_.size());
        const double n = static_cast<double>(channel);
        for (int m = -m_max_; m <= m_max_; ++m) {
            const double ph = -two_pi * m * f_hm_hz_ * n * tau_s + n * phi_lo_rad * sgn(m);
            out.w[static_cast<std::size_t>(m + m_max_)] = beta(m) * std::polar(1.0, ph);
        }
        return out;
    }

private:
    HarmonicWaveform(double f_hm_hz, int m_max, std::vector<cplx> coeffs, bool real_valued)
        : f_hm_hz_(f_hm_hz), m_max_(m_max), coeffs_(std::move(coeffs)),
          real_valued_(real_valued) {
        if (!(total_power() > 0.0))
            throw std::invalid_argument("waveform: all coefficients are zero");
    }

    static void check_f_hm(double f_hm_hz) {
        if (!(f_hm_hz > 0.0))
            throw std::invalid_argument("waveform: fundamental frequency must be > 0");
    }

    static bool is_conjugate_symmetric(const std::vector<cplx>& c, int m_max) {
        double mx = 0.0;
        for (const cplx& b : c) mx = std::max(mx, std::abs(b));
        const double tol = 1e-12 * std::max(1.0, mx);
        for (int m = 0; m <= m_max; ++m) {
            const cplx a = c[static_cast<std::size_t>(m + m_max)];
            const cplx b = c[static_cast<std::size_t>(-m + m_max)];
            if (std::abs(b - std::conj(a)) > tol) return false;
        }
        return true;
    }

    double f_hm_hz_;
    int m_max_;
    std::vector<cplx> coeffs_;
    bool real_valued_;
};

} // namespace sha

#endif // SHA_WAVEFORM_HPP
