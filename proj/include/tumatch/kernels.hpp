#pragma once

#include <cstddef>
#include <string>

namespace tumatch::kernels {

// Inner-loop primitives of the solvers. A scalar reference implementation
// always exists; an AVX2 variant is selected at runtime when the CPU supports
// it. Each variant is deterministic on its own; the two are equivalence-tested
// against each other. Reductions in the scalar lane use fixed-order pairwise
// summation; the AVX2 lane uses a fixed multi-accumulator order.
struct Ops {
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // log sum_i exp(x[i]); returns -inf on all--infinite input
    double (*logsumexp)(const double* x, std::size_t n);
    // log sum_i exp(x[i] - s[i])
    double (*logsumexp_shifted)(const double* x, const double* s, std::size_t n);
    // out[i] = exp(x[i] - s[i] + shift)
    void (*exp_shifted)(const double* x, const double* s, double shift,
                        double* out, std::size_t n);
    const char* name;
};

enum class Backend { Scalar, Avx2 };

const Ops& scalar_ops();
bool avx2_supported();
const Ops& avx2_ops(); // == scalar_ops() when unsupported

// Active backend: picked once from CPUID (overridable through the
// TUMATCH_KERNELS=scalar|avx2 environment variable or force_backend()).
const Ops& active();
Backend active_backend();
void force_backend(Backend b);
void reset_backend();

} // namespace tumatch::kernels
