#pragma once

#include <functional>
#include <vector>

namespace qmse {

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
    std::vector<double> x; // best point found
    double fx = 0.0;
    std::vector<double> trace; // incumbent value per improvement; trace[0] = f(x0)
    int n_evals = 0;
};

// Derivative-free local minimization in the linear-approximation family:
// keeps a simplex of d+1 evaluated points and steps along the descent ray
// of the model they interpolate (reflection through the opposite face),
// expanding on success and contracting toward the best point otherwise.
// The working radius starts at 1.0 and the search stops when it falls
// below `tol` or when max_iters objective evaluations are spent.
// Deterministic. Non-finite objective values abort with an error.
MinimizeResult minimize(const Objective& f, std::vector<double> x0, int max_iters,
                        double tol = 1e-6);

} // namespace qmse
