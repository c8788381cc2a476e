#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tumatch/basis.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

// Phi_Lambda = sum_k lambda_k phi^k, cellwise.
Table build_surplus(const BasisSet& basis, const std::vector<double>& lambda);

// Shannon entropy in nats, with 0 log 0 = 0.
double entropy(const std::vector<double>& margin);

// I(pi) = sum pi log(pi / (p q)), with 0 log 0 = 0. Natural logs.
double mutual_information(const Matching& pi, const Margins& m);

// C^k = sum_{x,y} pi(x,y) phi^k(x,y).
std::vector<double> covariations(const Matching& pi, const BasisSet& basis);
std::vector<double> covariations(const Table& pi, const BasisSet& basis);

Summary make_summary(const Matching& pi, const BasisSet& basis, const Margins& m);

// Two-way decomposition of a surplus table under product weights p (x) q:
// Phi = phi_bar + f(x) + g(y) + c with E_p f = E_q g = 0 and zero
// conditional means of phi_bar in each argument.
struct ZmoiResult {
    Table phi_bar;
    std::vector<double> f;
    std::vector<double> g;
    double c = 0.0;
};
ZmoiResult zmoi_normalize(const Table& phi, const Margins& m);

// N i.i.d. draws from pi; reproducible given the seed.
CoupleSample sample_couples(const Matching& pi, std::size_t n, std::uint64_t seed);

struct EmpiricalResult {
    Matching matching;
    Margins margins;
    std::optional<Summary> summary;
};
EmpiricalResult empirical_matching(const CoupleSample& sample, std::size_t tx,
                                   std::size_t ty,
                                   const BasisSet* basis = nullptr);

// Cell-count smoothing for the nonparametric path: adds alpha / (T_x T_y)
// to every cell before normalizing. Biases small samples; opt-in only.
Matching apply_pseudocount(const CoupleSample& sample, std::size_t tx, std::size_t ty,
                           double alpha);

} // namespace tumatch
