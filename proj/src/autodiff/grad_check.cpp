#include "eoprop/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "eoprop/autodiff/optim.hpp"

namespace eoprop::autodiff {

std::string GradCheckReport::summary() const {
    std::ostringstream os;
    os << (passed ? "ok" : "FAILED") << ": max rel err " << max_rel_error << " (abs " << max_abs_error << ") over "
       << coordinates << " coordinates, worst at param " << worst_param << "[" << worst_index << "], tol "
       << tolerance;
    return os.str();
}

GradCheckReport grad_check(const std::function<Value()>& fn, std::span<Value> params, double epsilon,
                           double tolerance, double floor) {
    zero_grads(params);
    fn().backward();
    std::vector<Tensor> analytic;
    for (const auto& p : params) analytic.push_back(p.grad());

    GradCheckReport report;
    report.tolerance = tolerance;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Tensor& data = params[pi].mutable_data();
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double saved = data[j];
            data[j] = saved + epsilon;
            const double plus = fn().item();
            data[j] = saved - epsilon;
            const double minus = fn().item();
            data[j] = saved;

            const double numeric = (plus - minus) / (2.0 * epsilon);
            const double a = analytic[pi][j];
            const double abs_err = std::abs(a - numeric);
            const double rel_err = abs_err / std::max({std::abs(a), std::abs(numeric), floor});
            ++report.coordinates;
            report.max_abs_error = std::max(report.max_abs_error, abs_err);
            if (rel_err > report.max_rel_error || !std::isfinite(rel_err)) {
                report.max_rel_error = rel_err;
                report.worst_param = pi;
                report.worst_index = j;
            }
        }
    }
    report.passed = std::isfinite(report.max_rel_error) && report.max_rel_error < tolerance;
    zero_grads(params);
    return report;
}

}  // namespace eoprop::autodiff
