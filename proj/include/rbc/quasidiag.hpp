#pragma once

// Quasidiagonality profiling: increasing projection chains, commutator
// norms, the quasi-symmetric operator sequence P_n(a) = p a p +
// p_perp a p_perp + p a p_perp, and the exact identity
// P_n(b) - P_n(b*)* = -[b, p_n] that ties symmetry defects to commutator
// norms. A finite chain can only witness decay, never the limit; the
// verdict is a documented classification of the computed profile.

#include <cstddef>
#include <string>
#include <vector>

#include "rbc/constructions.hpp"
#include "rbc/projection.hpp"
#include "rbc/rb.hpp"

namespace rbc {

class ProjectionChain {
 public:
  // Certifies the ordering p_i p_j = p_min(i,j) within tol.
  static ProjectionChain from_projections(std::vector<Projection> projections,
                                          double tol = 1e-10);
  static ProjectionChain coordinate(std::size_t dim,
                                    const std::vector<std::size_t>& ranks);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return projections_.size(); }
  const Projection& at(std::size_t k) const { return projections_[k]; }
  const std::vector<Projection>& projections() const { return projections_; }

 private:
  ProjectionChain() = default;
  std::size_t dim_ = 0;
  std::vector<Projection> projections_;
};

// |d p - p d| in operator norm.
double commutator_norm(const ComplexMatrix& d, const Projection& p);

// One certified weight -1 operator matching p_n per chain element.
// Certification is exhaustive up to dimension 16 and randomized above.
std::vector<RotaBaxterOperator> quasi_symmetric_sequence(
    const ProjectionChain& chain, double tol = 1e-10);

enum class QuasidiagonalVerdict { block_diagonal, decay_observed, no_decay };

const char* to_string(QuasidiagonalVerdict v);

struct QuasidiagonalReport {
  std::vector<double> commutator_profile;       // |[d, p_n]| per element
  std::vector<double> symmetry_profile;         // max_b |P_n(b) - P_n(b*)*|
  std::vector<double> word_commutator_profile;  // max_b |[b, p_n]|
  QuasidiagonalVerdict verdict = QuasidiagonalVerdict::no_decay;
  std::size_t probe_words_len = 0;
  bool final_rank_full = false;  // finite stand-in for p_n -> id
};

// Profiles over all words in d, d* up to max_word_len. Verdict:
// block_diagonal when every profile value is <= tol; decay_observed when
// the symmetry profile is non-increasing (1e-12 slack) and drops by at
// least a factor of two; no_decay otherwise.
QuasidiagonalReport symmetry_profile(const ComplexMatrix& d,
                                     const ProjectionChain& chain,
                                     std::size_t max_word_len = 4,
                                     double tol = 1e-10);

// max_n | |P_n(d) - P_n(d*)*| - |[d, p_n]| |; the two quantities agree as
// matrices up to sign, so this is numerical noise.
double symmetry_equals_commutator_check(const ComplexMatrix& d,
                                        const ProjectionChain& chain);

// P_n(b) evaluated directly from the block formula, without building a
// superoperator.
ComplexMatrix quasi_symmetric_apply(const Projection& p,
                                    const ComplexMatrix& b);

}  // namespace rbc
