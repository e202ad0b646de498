#include "emopeak/dsp.hpp"
#include "emopeak/error.hpp"

#include "../oracles.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace emopeak;
using cd = std::complex<double>;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no Error thrown");
    return ErrorCode::IoFailure;
}

std::vector<cd> random_complex(Rng& rng, std::size_t n)
{
    std::vector<cd> v(n);
    for (auto& x : v)
        x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return v;
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("pre-emphasis")
{
    const auto y = pre_emphasize(AudioBuffer({1, 1, 1}, 8000), 0.97);
    CHECK(y.samples()[0] == 1.0);
    CHECK(y.samples()[1] == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(y.samples()[2] == doctest::Approx(0.03).epsilon(1e-12));

    const auto imp = pre_emphasize(AudioBuffer({1, 0, 0}, 8000), 0.97);
    CHECK(imp.samples()[1] == -0.97);
    CHECK(imp.samples()[2] == 0.0);

    Rng rng(1);
    const AudioBuffer x(testing::random_vector(rng, 100), 8000);
    const auto same = pre_emphasize(x, 0.0);
    CHECK(std::equal(same.samples().begin(), same.samples().end(), x.samples().begin()));
    CHECK(same.sample_rate_hz() == 8000);
}

TEST_CASE("framing")
{
    CHECK(frame_signal(AudioBuffer(std::vector<double>(400, 0.0), 16000), 400, 160).size() == 1);

    std::vector<double> ramp(720);
    for (std::size_t i = 0; i < ramp.size(); ++i)
        ramp[i] = static_cast<double>(i) / 1000.0;
    const auto fm = frame_signal(AudioBuffer(ramp, 16000), 400, 160);
    REQUIRE(fm.size() == 3);
    CHECK(fm.frames[0][0] == ramp[0]);
    CHECK(fm.frames[1][0] == ramp[160]);
    CHECK(fm.frames[2][0] == ramp[320]);
    // every frame sample maps back to its source position
    for (std::size_t f = 0; f < fm.size(); ++f)
        for (std::size_t j = 0; j < fm.frame_len; ++j)
            REQUIRE(fm.frames[f][j] == ramp[f * fm.hop_len + j]);

    CHECK(code_of([] { frame_signal(AudioBuffer(std::vector<double>(399, 0.0), 16000), 400, 160); }) ==
          ErrorCode::SignalTooShort);
    CHECK(code_of([] { frame_signal(AudioBuffer(std::vector<double>(999, 0.0), 16000), 400, 0); }) ==
          ErrorCode::InvalidLength);

    const auto ms = frame_signal_ms(AudioBuffer(std::vector<double>(16000, 0.0), 16000), 25.0, 10.0);
    CHECK(ms.frame_len == 400);
    CHECK(ms.hop_len == 160);
    CHECK(ms.size() == 98);
}

TEST_CASE("hamming window values")
{
    const auto w4 = hamming_window(4);
    CHECK(w4[0] == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(w4[1] == doctest::Approx(0.77).epsilon(1e-14));
    CHECK(w4[2] == doctest::Approx(0.77).epsilon(1e-14));
    CHECK(w4[3] == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(hamming_window(5)[2] == 1.0);
    CHECK_THROWS_AS(hamming_window(1), Error);
}

TEST_CASE("hamming symmetry and range for every length 2..8192")
{
    for (std::size_t len = 2; len <= 8192; ++len) {
        const auto w = hamming_window(len);
        REQUIRE(w.size() == len);
        REQUIRE(std::abs(w.front() - 0.08) <= 1e-12);
        REQUIRE(std::abs(w.back() - 0.08) <= 1e-12);
        for (std::size_t n = 0; n < len; ++n) {
            REQUIRE(w[n] == w[len - 1 - n]);
            REQUIRE(w[n] >= 0.08 - 1e-12);
            REQUIRE(w[n] <= 1.0);
        }
        if (len % 2 == 1)
            REQUIRE(w[(len - 1) / 2] == 1.0);
    }
}

TEST_CASE("apply_window")
{
    FrameMatrix fm;
    fm.frame_len = 4;
    fm.hop_len = 4;
    fm.sample_rate_hz = 8000;
    fm.frames = {{2, 2, 2, 2}, {1, 1, 1, 1}, {0, 0, 0, 0}};
    const auto w = hamming_window(4);
    const auto out = apply_window(fm, w);
    CHECK(out.frames[0][0] == doctest::Approx(0.16));
    CHECK(out.frames[0][1] == doctest::Approx(1.54));
    CHECK(out.frames[0][2] == doctest::Approx(1.54));
    CHECK(out.frames[0][3] == doctest::Approx(0.16));
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(out.frames[1][j] == w[j]);
        CHECK(out.frames[2][j] == 0.0);
    }
    CHECK_THROWS_AS(apply_window(fm, hamming_window(5)), Error);
}

TEST_CASE("power-of-two helpers")
{
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(512));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(400));
    CHECK(next_power_of_two(400) == 512);
    CHECK(next_power_of_two(512) == 512);
    CHECK(next_power_of_two(1) == 1);
}

TEST_CASE("fft special inputs")
{
    std::vector<double> impulse(16, 0.0);
    impulse[0] = 1.0;
    for (const auto& b : fft(std::span<const double>(impulse), 16)) {
        CHECK(b.real() == doctest::Approx(1.0));
        CHECK(std::abs(b.imag()) < 1e-15);
    }
    const std::vector<double> ones(8, 1.0);
    const auto s = fft(std::span<const double>(ones), 8);
    CHECK(std::abs(s[0] - cd(8.0)) < 1e-12);
    for (std::size_t k = 1; k < 8; ++k)
        CHECK(std::abs(s[k]) < 1e-12);

    CHECK(code_of([&] { fft(std::span<const double>(ones), 12); }) == ErrorCode::NotPowerOfTwo);
    CHECK(code_of([&] { fft(std::span<const double>(ones), 4); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("fft matches the direct DFT")
{
    Rng rng(2024);
    for (std::size_t n = 2; n <= 1024; n *= 2) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_complex(rng, n);
            const auto fast = fft(std::span<const cd>(x), n);
            const auto slow = oracle::direct_dft(x);
            double worst = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(fast[k] - slow[k]));
            REQUIRE(worst < 1e-9);
        }
    }
}

TEST_CASE("fft zero-pads short input")
{
    Rng rng(5);
    const auto x = random_complex(rng, 300);
    auto padded = x;
    padded.resize(512, 0.0);
    const auto a = fft(std::span<const cd>(x), 512);
    const auto b = oracle::direct_dft(padded);
    for (std::size_t k = 0; k < 512; ++k)
        REQUIRE(std::abs(a[k] - b[k]) < 1e-9);
}

TEST_CASE("fft linearity")
{
    Rng rng(3);
    for (std::size_t n = 2; n <= 1024; n *= 2) {
        const auto x = random_complex(rng, n);
        const auto y = random_complex(rng, n);
        const cd a(rng.uniform(-2, 2), rng.uniform(-2, 2)), b(rng.uniform(-2, 2), rng.uniform(-2, 2));
        std::vector<cd> mix(n);
        for (std::size_t i = 0; i < n; ++i)
            mix[i] = a * x[i] + b * y[i];
        const auto fx = fft(std::span<const cd>(x), n), fy = fft(std::span<const cd>(y), n);
        const auto fm = fft(std::span<const cd>(mix), n);
        for (std::size_t k = 0; k < n; ++k)
            REQUIRE(std::abs(fm[k] - (a * fx[k] + b * fy[k])) < 1e-9);
    }
}

TEST_CASE("fft conjugate symmetry of real input")
{
    Rng rng(4);
    for (std::size_t n = 2; n <= 1024; n *= 2) {
        const auto x = testing::random_vector(rng, n);
        const auto s = fft(std::span<const double>(x), n);
        for (std::size_t k = 1; k < n; ++k)
            REQUIRE(std::abs(s[k] - std::conj(s[n - k])) < 1e-12);
    }
}

TEST_CASE("power spectrum")
{
    const std::vector<double> zero(512, 0.0);
    for (double p : power_spectrum(zero, 512))
        CHECK(p == 0.0);

    const std::size_t n = 256, k0 = 19;
    std::vector<double> tone(n);
    for (std::size_t i = 0; i < n; ++i)
        tone[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k0 * i) / static_cast<double>(n));
    const auto p = power_spectrum(tone, n);
    REQUIRE(p.size() == n / 2 + 1);
    const double peak = p[k0];
    CHECK(peak == doctest::Approx(static_cast<double>(n) / 4.0));
    for (std::size_t k = 0; k < p.size(); ++k)
        if (k != k0)
            CHECK(p[k] < 1e-9 * peak);
}

TEST_CASE("Parseval on windowed random frames")
{
    Rng rng(99);
    const auto w = hamming_window(400);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = testing::random_vector(rng, 400);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] *= w[i];
        const std::size_t n = 512;
        const auto p = power_spectrum(x, n);
        double time_energy = 0.0;
        for (double v : x)
            time_energy += v * v;
        double freq_energy = p[0] + p[n / 2];
        for (std::size_t k = 1; k < n / 2; ++k)
            freq_energy += 2.0 * p[k];
        REQUIRE(std::abs(freq_energy - time_energy) / time_energy < 1e-9);
    }
}

}  // TEST_SUITE
