#ifndef FINFO_OPTIM_HPP
#define FINFO_OPTIM_HPP

#include <functional>
#include <vector>

namespace finfo {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Deterministic Nelder-Mead simplex minimization. The objective may return
/// +infinity to encode box constraints. Converged when the simplex diameter
/// falls below rel_tol relative to the best vertex.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const std::vector<double>& steps,
                             int max_evaluations = 10000,
                             double rel_tol = 1e-8);

} // namespace finfo

#endif
