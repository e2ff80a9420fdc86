#include "rbc/quasidiag.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbc/decomp.hpp"
#include "rbc/errors.hpp"

namespace rbc {

ProjectionChain ProjectionChain::from_projections(
    std::vector<Projection> projections, double tol) {
  if (projections.empty()) {
    throw InputError("projection chain: at least one projection required");
  }
  const std::size_t n = projections.front().dim();
  for (const auto& p : projections) {
    if (p.dim() != n) {
      throw DimensionMismatch("projection chain: mixed dimensions");
    }
  }
  // p_i <= p_j is certified algebraically: p_i p_j = p_j p_i = p_min(i,j)
  for (std::size_t i = 0; i < projections.size(); ++i) {
    for (std::size_t j = 0; j < projections.size(); ++j) {
      const Projection& lo = projections[std::min(i, j)];
      const double defect = operator_norm(
          projections[i].matrix() * projections[j].matrix() - lo.matrix());
      if (defect > tol) {
        CertificationWitness w;
        w.description = "p_" + std::to_string(i) + " p_" + std::to_string(j) +
                        " differs from p_min by " + std::to_string(defect);
        w.index_a = static_cast<long>(i);
        w.index_b = static_cast<long>(j);
        w.residual = defect;
        throw CertificationFailed("projection chain is not increasing", w);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < projections.size(); ++i) {
    if (projections[i].rank() > projections[i + 1].rank()) {
      throw InputError("projection chain: ranks must be non-decreasing");
    }
  }
  ProjectionChain c;
  c.dim_ = n;
  c.projections_ = std::move(projections);
  return c;
}

ProjectionChain ProjectionChain::coordinate(
    std::size_t dim, const std::vector<std::size_t>& ranks) {
  std::vector<Projection> ps;
  ps.reserve(ranks.size());
  for (std::size_t r : ranks) ps.push_back(Projection::coordinate(dim, r));
  return from_projections(std::move(ps));
}

double commutator_norm(const ComplexMatrix& d, const Projection& p) {
  if (!d.is_square() || d.rows() != p.dim()) {
    throw DimensionMismatch("commutator_norm: dimension mismatch");
  }
  return operator_norm(d * p.matrix() - p.matrix() * d);
}

ComplexMatrix quasi_symmetric_apply(const Projection& p,
                                    const ComplexMatrix& b) {
  const ComplexMatrix& pm = p.matrix();
  const ComplexMatrix pperp = ComplexMatrix::identity(p.dim()) - pm;
  const ComplexMatrix pb = pm * b;
  return pb * pm + pperp * b * pperp + pb * pperp;
}

std::vector<RotaBaxterOperator> quasi_symmetric_sequence(
    const ProjectionChain& chain, double tol) {
  const std::size_t n = chain.dim();
  std::vector<RotaBaxterOperator> out;
  out.reserve(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Projection& p = chain.at(k);
    const std::size_t r = p.rank();
    const SuperOperator op = SuperOperator::triangular(
        SuperOperator::identity(r), SuperOperator::identity(n - r), p);
    out.push_back(certify_rb(op, cd{-1.0}, AlgebraSpace::full(n), tol));
  }
  return out;
}

const char* to_string(QuasidiagonalVerdict v) {
  switch (v) {
    case QuasidiagonalVerdict::block_diagonal:
      return "block_diagonal";
    case QuasidiagonalVerdict::decay_observed:
      return "decay_observed";
    case QuasidiagonalVerdict::no_decay:
      return "no_decay";
  }
  return "unknown";
}

QuasidiagonalReport symmetry_profile(const ComplexMatrix& d,
                                     const ProjectionChain& chain,
                                     std::size_t max_word_len, double tol) {
  if (!d.is_square() || d.rows() != chain.dim()) {
    throw DimensionMismatch("symmetry_profile: dimension mismatch");
  }
  const std::vector<ComplexMatrix> words = cstar_words(d, max_word_len);

  QuasidiagonalReport report;
  report.probe_words_len = max_word_len;
  report.final_rank_full =
      chain.at(chain.size() - 1).rank() == chain.dim();

  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Projection& p = chain.at(k);
    report.commutator_profile.push_back(commutator_norm(d, p));
    double sym = 0.0;
    double comm = 0.0;
    for (const auto& b : words) {
      const ComplexMatrix pb = quasi_symmetric_apply(p, b);
      const ComplexMatrix pbs = quasi_symmetric_apply(p, adjoint(b));
      sym = std::max(sym, operator_norm(pb - adjoint(pbs)));
      comm = std::max(comm, commutator_norm(b, p));
    }
    report.symmetry_profile.push_back(sym);
    report.word_commutator_profile.push_back(comm);
  }

  bool all_small = true;
  for (std::size_t k = 0; k < report.symmetry_profile.size(); ++k) {
    if (report.symmetry_profile[k] > tol ||
        report.word_commutator_profile[k] > tol) {
      all_small = false;
      break;
    }
  }
  if (all_small) {
    report.verdict = QuasidiagonalVerdict::block_diagonal;
    return report;
  }

  const auto& prof = report.symmetry_profile;
  bool non_increasing = true;
  for (std::size_t k = 0; k + 1 < prof.size(); ++k) {
    if (prof[k + 1] > prof[k] + 1e-12) {
      non_increasing = false;
      break;
    }
  }
  if (non_increasing && prof.size() >= 2 &&
      prof.back() < 0.5 * prof.front()) {
    report.verdict = QuasidiagonalVerdict::decay_observed;
  } else {
    report.verdict = QuasidiagonalVerdict::no_decay;
  }
  return report;
}

double symmetry_equals_commutator_check(const ComplexMatrix& d,
                                        const ProjectionChain& chain) {
  double worst = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Projection& p = chain.at(k);
    const ComplexMatrix pd = quasi_symmetric_apply(p, d);
    const ComplexMatrix pds = quasi_symmetric_apply(p, adjoint(d));
    const double sym = operator_norm(pd - adjoint(pds));
    const double comm = commutator_norm(d, p);
    worst = std::max(worst, std::abs(sym - comm));
  }
  return worst;
}

}  // namespace rbc
