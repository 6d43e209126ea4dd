#include "peakon/solution_field.hpp"

#include "peakon/quadrature.hpp"

namespace peakon {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::grid: return "grid";
    case Provenance::static_ensemble: return "static_ensemble";
    case Provenance::zero: return "zero";
  }
  return "unknown";
}

double SolutionField::energy(double t) const { return energy_quadrature(*this, t).value; }

}  // namespace peakon
