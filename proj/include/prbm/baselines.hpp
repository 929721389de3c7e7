#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>

namespace prbm {

// Random walk with drift, fit per series on first differences.
struct RwModel {
    Eigen::VectorXd drift;
};

// y_t = c + A1 * y_{t-1} + e_t
struct VarModel {
    Eigen::VectorXd c;
    Eigen::MatrixXd a1;
};

struct Forecast {
    Eigen::VectorXd value;
    Eigen::VectorXi direction;  // sign of the forecast, ties (0) -> 1 ("up")
};

// series is T x n, one column per stock.
RwModel fit_rw(const Eigen::MatrixXd& series);
Forecast predict_rw(const RwModel& model, const Eigen::VectorXd& y_t);

// OLS per equation; falls back to ridge with a tiny trace-scaled penalty
// when the regressor matrix is rank deficient.
VarModel fit_var1(const Eigen::MatrixXd& series);
Forecast predict_var1(const VarModel& model, const Eigen::VectorXd& y_prev);

void write_rw_csv(std::ostream& out, const RwModel& model);
void write_var_csv(std::ostream& out, const VarModel& model);

}  // namespace prbm
