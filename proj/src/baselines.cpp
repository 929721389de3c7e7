#include "prbm/baselines.hpp"

#include <stdexcept>

namespace prbm {

namespace {

Eigen::VectorXi threshold_direction(const Eigen::VectorXd& forecast) {
    Eigen::VectorXi dir(forecast.size());
    for (Eigen::Index i = 0; i < forecast.size(); ++i)
        dir(i) = forecast(i) >= 0.0 ? 1 : 0;
    return dir;
}

}  // namespace

RwModel fit_rw(const Eigen::MatrixXd& series) {
    const Eigen::Index t = series.rows();
    if (t < 2) throw std::domain_error("fit_rw: need at least 2 observations");
    RwModel model;
    model.drift = (series.bottomRows(t - 1) - series.topRows(t - 1))
                      .colwise()
                      .mean()
                      .transpose();
    return model;
}

Forecast predict_rw(const RwModel& model, const Eigen::VectorXd& y_t) {
    if (y_t.size() != model.drift.size())
        throw std::invalid_argument("predict_rw: shape mismatch");
    Forecast f;
    f.value = y_t + model.drift;
    f.direction = threshold_direction(model.drift);
    return f;
}

VarModel fit_var1(const Eigen::MatrixXd& series) {
    const Eigen::Index t = series.rows();
    const Eigen::Index n = series.cols();
    if (t < n + 2) throw std::domain_error("fit_var1: need T >= n + 2");

    // regressors [1, y_{t-1}], targets y_t
    Eigen::MatrixXd x(t - 1, n + 1);
    x.col(0).setOnes();
    x.rightCols(n) = series.topRows(t - 1);
    const Eigen::MatrixXd y = series.bottomRows(t - 1);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    Eigen::MatrixXd coef;  // (n+1) x n
    if (qr.rank() == n + 1) {
        coef = qr.solve(y);
    } else {
        const Eigen::MatrixXd xtx = x.transpose() * x;
        const double penalty =
            1e-8 * xtx.trace() / static_cast<double>(n + 1);
        coef = (xtx + penalty * Eigen::MatrixXd::Identity(n + 1, n + 1))
                   .ldlt()
                   .solve(x.transpose() * y);
    }

    VarModel model;
    model.c = coef.row(0).transpose();
    model.a1 = coef.bottomRows(n).transpose();
    return model;
}

Forecast predict_var1(const VarModel& model, const Eigen::VectorXd& y_prev) {
    if (y_prev.size() != model.a1.cols())
        throw std::invalid_argument("predict_var1: shape mismatch");
    Forecast f;
    f.value = model.c + model.a1 * y_prev;
    f.direction = threshold_direction(f.value);
    return f;
}

void write_rw_csv(std::ostream& out, const RwModel& model) {
    out << "series,drift\n";
    for (Eigen::Index i = 0; i < model.drift.size(); ++i)
        out << i << ',' << model.drift(i) << '\n';
}

void write_var_csv(std::ostream& out, const VarModel& model) {
    const Eigen::Index n = model.c.size();
    out << "equation,c";
    for (Eigen::Index j = 0; j < n; ++j) out << ",a1_" << j;
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        out << i << ',' << model.c(i);
        for (Eigen::Index j = 0; j < n; ++j) out << ',' << model.a1(i, j);
        out << '\n';
    }
}

}  // namespace prbm
