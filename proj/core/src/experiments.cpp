#include "trimcond/experiments.hpp"

namespace trimcond {

std::string precond_name(Preconditioner p) {
  switch (p) {
    case Preconditioner::None: return "none";
    case Preconditioner::Jacobi: return "jacobi";
    case Preconditioner::Sipic: return "sipic";
    case Preconditioner::SchwarzCut: return "schwarz_cut";
    case Preconditioner::SchwarzContainment: return "schwarz_cont";
    case Preconditioner::SchwarzIntersection: return "schwarz_int";
    case Preconditioner::Deflation: return "deflation";
    case Preconditioner::DeflationReduced: return "deflation_reduced";
  }
  return "?";
}

std::vector<Real> log_spaced_desc(Real hi, Real lo, int count) {
  std::vector<Real> out(count);
  const Real lh = std::log10(hi), ll = std::log10(lo);
  for (int i = 0; i < count; ++i)
    out[i] = std::pow(Real(10), lh + (ll - lh) * i / (count - 1));
  return out;
}

}  // namespace trimcond
