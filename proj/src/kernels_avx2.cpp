// kernels_avx2.cpp — AVX2 variants of the simulation kernels.
//
// Four paths per vector. Every floating-point operation mirrors the scalar
// reference in kernels_scalar.cpp / fastmath.hpp in the same order, with
// branches replaced by compute-both-and-blend. Inactive jump lanes add an
// exact +0.0, so lane results stay bit-identical to the scalar kernel.
// Compiled with -mavx2; entered only after the runtime dispatch check.

#include "sitmark/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

#include "sitmark/fastmath.hpp"
#include "sitmark/rng.hpp"

namespace sitmark::kernels::detail {

namespace {

namespace fm = sitmark::fastmath::detail;

// Low 64 bits of the lane-wise product a*b (AVX2 has no 64-bit multiply).
inline __m256i mul64_lo(__m256i a, __m256i b) {
    const __m256i a_hi = _mm256_srli_epi64(a, 32);
    const __m256i b_hi = _mm256_srli_epi64(b, 32);
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i cross =
        _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i v_mix64(__m256i z) {
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mul64_lo(z, _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mul64_lo(z, _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
    return z;
}

// rng::at for four stream keys sharing one counter.
inline __m256i v_rng_at(__m256i keys, std::uint64_t counter) {
    const std::uint64_t cg = counter * rng::kGolden;
    return v_mix64(_mm256_add_epi64(keys, _mm256_set1_epi64x(static_cast<long long>(cg))));
}

// Exact u64 -> double for values below 2^52.
inline __m256d u52_to_double(__m256i v) {
    const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000ll);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)),
                         _mm256_set1_pd(0x1.0p52));
}

// Mirrors rng::uniform01.
inline __m256d v_uniform01(__m256i bits) {
    const __m256d mant = u52_to_double(_mm256_srli_epi64(bits, 12));
    return _mm256_mul_pd(_mm256_add_pd(mant, _mm256_set1_pd(0.5)),
                         _mm256_set1_pd(0x1.0p-52));
}

// Exact int64 -> double for |v| < 2^51.
inline __m256d i64_to_double_small(__m256i v) {
    const __m256i shifted = _mm256_add_epi64(v, _mm256_set1_epi64x(0x4338000000000000ll));
    return _mm256_sub_pd(_mm256_castsi256_pd(shifted), _mm256_set1_pd(0x1.8p52));
}

// Mirrors fastmath::det_log.
inline __m256d v_det_log(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    __m256i e = _mm256_sub_epi64(
        _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FFll)),
        _mm256_set1_epi64x(1023));
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
                        _mm256_set1_epi64x(0x3FF0000000000000ll)));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(fm::kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));
    const __m256d ed = i64_to_double_small(e);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d w = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d w2 = _mm256_mul_pd(w, w);
    __m256d p = _mm256_set1_pd(fm::kLogC8);
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC7));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC6));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC5));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC4));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC3));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC2));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC1));
    p = _mm256_add_pd(_mm256_mul_pd(p, w2), _mm256_set1_pd(fm::kLogC0));
    const __m256d log_m = _mm256_mul_pd(w, p);
    return _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(ed, _mm256_set1_pd(fm::kLn2Hi)), log_m),
        _mm256_mul_pd(ed, _mm256_set1_pd(fm::kLn2Lo)));
}

// Mirrors fastmath::det_exp.
inline __m256d v_det_exp(__m256d x) {
    const __m256d shifter = _mm256_set1_pd(fm::kShifter);
    const __m256d t =
        _mm256_add_pd(_mm256_mul_pd(x, _mm256_set1_pd(fm::kInvLn2)), shifter);
    const __m256d nd = _mm256_sub_pd(t, shifter);
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(nd, _mm256_set1_pd(fm::kLn2Hi)));
    r = _mm256_sub_pd(r, _mm256_mul_pd(nd, _mm256_set1_pd(fm::kLn2Lo)));

    const __m256d one = _mm256_set1_pd(1.0);
    __m256d p = _mm256_set1_pd(fm::kExpC13);
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC12));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC11));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC10));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC9));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC8));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC7));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC6));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC5));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC4));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC3));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(fm::kExpC2));
    p = _mm256_add_pd(_mm256_mul_pd(p, r), one);
    p = _mm256_add_pd(_mm256_mul_pd(p, r), one);

    const __m256i tbits = _mm256_castpd_si256(t);
    const __m256i n =
        _mm256_sub_epi64(_mm256_and_si256(tbits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
                         _mm256_set1_epi64x(0x0008000000000000ll));
    const __m256i scale_bits =
        _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(scale_bits));
}

// Mirrors fastmath::norminv (compute both regions, blend on the same masks).
inline __m256d v_norminv(__m256d p) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d q = _mm256_sub_pd(p, _mm256_set1_pd(0.5));
    const __m256d central =
        _mm256_and_pd(_mm256_cmp_pd(q, _mm256_set1_pd(0.425), _CMP_LT_OQ),
                      _mm256_cmp_pd(q, _mm256_set1_pd(-0.425), _CMP_GT_OQ));

    const __m256d rc = _mm256_sub_pd(_mm256_set1_pd(0.180625), _mm256_mul_pd(q, q));
    __m256d num = _mm256_set1_pd(fm::kA7);
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA6));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA5));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA4));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA3));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA2));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA1));
    num = _mm256_add_pd(_mm256_mul_pd(num, rc), _mm256_set1_pd(fm::kA0));
    __m256d den = _mm256_set1_pd(fm::kB7);
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB6));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB5));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB4));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB3));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB2));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), _mm256_set1_pd(fm::kB1));
    den = _mm256_add_pd(_mm256_mul_pd(den, rc), one);
    const __m256d val_central = _mm256_div_pd(_mm256_mul_pd(q, num), den);

    // ~81% of draws land with all four lanes central; the blend below would
    // discard the tail values, so skip computing them.
    if (_mm256_movemask_pd(central) == 0xF) {
        return val_central;
    }

    const __m256d qneg = _mm256_cmp_pd(q, _mm256_setzero_pd(), _CMP_LT_OQ);
    const __m256d tail = _mm256_blendv_pd(_mm256_sub_pd(one, p), p, qneg);
    __m256d r = v_det_log(tail);
    r = _mm256_sqrt_pd(_mm256_xor_pd(r, sign_mask));
    const __m256d mid = _mm256_cmp_pd(r, _mm256_set1_pd(5.0), _CMP_LE_OQ);

    const __m256d sm = _mm256_sub_pd(r, _mm256_set1_pd(1.6));
    __m256d num_m = _mm256_set1_pd(fm::kC7);
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC6));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC5));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC4));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC3));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC2));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC1));
    num_m = _mm256_add_pd(_mm256_mul_pd(num_m, sm), _mm256_set1_pd(fm::kC0));
    __m256d den_m = _mm256_set1_pd(fm::kD7);
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD6));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD5));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD4));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD3));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD2));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), _mm256_set1_pd(fm::kD1));
    den_m = _mm256_add_pd(_mm256_mul_pd(den_m, sm), one);
    const __m256d val_mid = _mm256_div_pd(num_m, den_m);

    const __m256d sf = _mm256_sub_pd(r, _mm256_set1_pd(5.0));
    __m256d num_f = _mm256_set1_pd(fm::kE7);
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE6));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE5));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE4));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE3));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE2));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE1));
    num_f = _mm256_add_pd(_mm256_mul_pd(num_f, sf), _mm256_set1_pd(fm::kE0));
    __m256d den_f = _mm256_set1_pd(fm::kF7);
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF6));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF5));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF4));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF3));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF2));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), _mm256_set1_pd(fm::kF1));
    den_f = _mm256_add_pd(_mm256_mul_pd(den_f, sf), one);
    const __m256d val_far = _mm256_div_pd(num_f, den_f);

    __m256d val_tail = _mm256_blendv_pd(val_far, val_mid, mid);
    val_tail = _mm256_blendv_pd(val_tail, _mm256_xor_pd(val_tail, sign_mask), qneg);
    return _mm256_blendv_pd(val_tail, val_central, central);
}

// Poisson count per lane: #{k : u >= cdf[k]}.
inline __m256i v_poisson_count(__m256d un, const double* cdf, std::size_t table) {
    __m256i count = _mm256_setzero_si256();
    for (std::size_t j = 0; j < table; ++j) {
        const __m256d ge = _mm256_cmp_pd(un, _mm256_set1_pd(cdf[j]), _CMP_GE_OQ);
        count = _mm256_sub_epi64(count, _mm256_castpd_si256(ge));
    }
    return count;
}

inline __m256i load_keys(std::uint64_t base_seed, std::uint64_t first_path) {
    alignas(32) std::uint64_t keys[4];
    for (int lane = 0; lane < 4; ++lane) {
        keys[lane] = rng::stream_key(base_seed, first_path + static_cast<std::uint64_t>(lane));
    }
    return _mm256_load_si256(reinterpret_cast<const __m256i*>(keys));
}

}  // namespace

void simulate_paths_avx2(const StepPlan& plan, std::uint64_t base_seed,
                         std::uint64_t first_path, std::size_t n_paths,
                         double* log_prices, std::uint16_t* jump_counts) {
    const std::size_t n_steps = plan.n_steps;
    const std::size_t row = n_steps + 1;
    const std::size_t table = plan.poisson_cdf.size();
    const double* cdf = plan.poisson_cdf.data();
    const std::size_t n_vec = n_paths / 4 * 4;

    const __m256d decay = _mm256_set1_pd(plan.decay);
    const __m256d noise_scale = _mm256_set1_pd(plan.noise_scale);
    const __m256d jump_mean = _mm256_set1_pd(plan.jump_mean);
    const __m256d jump_std = _mm256_set1_pd(plan.jump_std);

    for (std::size_t p = 0; p < n_vec; p += 4) {
        const __m256i keys = load_keys(base_seed, first_path + p);
        double* rows[4];
        std::uint16_t* jrows[4];
        for (int lane = 0; lane < 4; ++lane) {
            rows[lane] = log_prices + (p + static_cast<std::size_t>(lane)) * row;
            rows[lane][0] = plan.x0;
            jrows[lane] =
                jump_counts ? jump_counts + (p + static_cast<std::size_t>(lane)) * n_steps : nullptr;
        }

        __m256d x = _mm256_set1_pd(plan.x0);
        for (std::size_t k = 0; k < n_steps; ++k) {
            const std::uint64_t c0 = static_cast<std::uint64_t>(k) * plan.draw_stride;
            const __m256d z = v_norminv(v_uniform01(v_rng_at(keys, c0)));
            const __m256d un = v_uniform01(v_rng_at(keys, c0 + 1));

            const __m256i count = v_poisson_count(un, cdf, table);
            alignas(32) std::int64_t counts[4];
            _mm256_store_si256(reinterpret_cast<__m256i*>(counts), count);
            const std::int64_t max_count =
                std::max(std::max(counts[0], counts[1]), std::max(counts[2], counts[3]));

            __m256d jump_sum = _mm256_setzero_pd();
            for (std::int64_t j = 0; j < max_count; ++j) {
                const std::uint64_t cj = c0 + 2 + static_cast<std::uint64_t>(j);
                const __m256d zj = v_norminv(v_uniform01(v_rng_at(keys, cj)));
                const __m256d term = _mm256_add_pd(jump_mean, _mm256_mul_pd(jump_std, zj));
                const __m256d active =
                    _mm256_castsi256_pd(_mm256_cmpgt_epi64(count, _mm256_set1_epi64x(j)));
                jump_sum = _mm256_add_pd(jump_sum, _mm256_and_pd(term, active));
            }

            x = _mm256_add_pd(_mm256_mul_pd(decay, x), _mm256_set1_pd(plan.drift[k]));
            x = _mm256_add_pd(x, _mm256_mul_pd(noise_scale, z));
            x = _mm256_add_pd(x, jump_sum);

            alignas(32) double xv[4];
            _mm256_store_pd(xv, x);
            for (int lane = 0; lane < 4; ++lane) {
                rows[lane][k + 1] = xv[lane];
                if (jrows[lane]) {
                    jrows[lane][k] = static_cast<std::uint16_t>(counts[lane]);
                }
            }
        }
    }

    if (n_vec < n_paths) {
        simulate_paths_scalar(plan, base_seed, first_path + n_vec, n_paths - n_vec,
                              log_prices + n_vec * row,
                              jump_counts ? jump_counts + n_vec * n_steps : nullptr);
    }
}

void sample_terminal_avx2(const TerminalPlan& plan, std::uint64_t base_seed,
                          std::uint64_t first_path, std::size_t n_paths,
                          double* log_terminal) {
    const std::size_t table = plan.poisson_cdf.size();
    const double* cdf = plan.poisson_cdf.data();
    const std::size_t n_vec = n_paths / 4 * 4;

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d jump_mean = _mm256_set1_pd(plan.jump_mean);
    const __m256d jump_std = _mm256_set1_pd(plan.jump_std);
    const __m256d neg_kappa_dt = _mm256_set1_pd(-plan.kappa_dt);

    for (std::size_t p = 0; p < n_vec; p += 4) {
        const __m256i keys = load_keys(base_seed, first_path + p);
        const __m256d z = v_norminv(v_uniform01(v_rng_at(keys, 0)));
        const __m256d un = v_uniform01(v_rng_at(keys, 1));

        const __m256i count = v_poisson_count(un, cdf, table);
        alignas(32) std::int64_t counts[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(counts), count);
        const std::int64_t max_count =
            std::max(std::max(counts[0], counts[1]), std::max(counts[2], counts[3]));

        __m256d jump_sum = _mm256_setzero_pd();
        for (std::int64_t j = 0; j < max_count; ++j) {
            const std::uint64_t cj = 2 + 2 * static_cast<std::uint64_t>(j);
            const __m256d ut = v_uniform01(v_rng_at(keys, cj));
            const __m256d zj = v_norminv(v_uniform01(v_rng_at(keys, cj + 1)));
            const __m256d decay_j = v_det_exp(_mm256_mul_pd(neg_kappa_dt, _mm256_sub_pd(one, ut)));
            const __m256d term =
                _mm256_mul_pd(_mm256_add_pd(jump_mean, _mm256_mul_pd(jump_std, zj)), decay_j);
            const __m256d active =
                _mm256_castsi256_pd(_mm256_cmpgt_epi64(count, _mm256_set1_epi64x(j)));
            jump_sum = _mm256_add_pd(jump_sum, _mm256_and_pd(term, active));
        }

        __m256d x = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(plan.decay), _mm256_set1_pd(plan.x_t)),
                                  _mm256_set1_pd(plan.mean_shift));
        x = _mm256_add_pd(x, _mm256_mul_pd(_mm256_set1_pd(plan.noise_scale), z));
        x = _mm256_add_pd(x, jump_sum);
        _mm256_storeu_pd(log_terminal + p, x);
    }

    if (n_vec < n_paths) {
        sample_terminal_scalar(plan, base_seed, first_path + n_vec, n_paths - n_vec,
                               log_terminal + n_vec);
    }
}

}  // namespace sitmark::kernels::detail

#endif  // x86_64
