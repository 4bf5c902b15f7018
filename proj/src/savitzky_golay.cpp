#include <Eigen/Dense>

#include "cdl/assumption_tests.hpp"

namespace cdl {

namespace {

void check_sg(std::size_t n, int window, int degree) {
    if (window < 3 || window % 2 == 0) throw AssumptionTestError("window must be odd and at least 3");
    if (degree < 0 || degree >= window) throw AssumptionTestError("degree must satisfy 0 <= degree < window");
    if (static_cast<std::size_t>(window) > n) throw AssumptionTestError("window exceeds the series length");
}

// Design over offsets t = first - at .. first + window - 1 - at, scaled by h.
Eigen::MatrixXd design(int window, int degree, int first, int at, double h) {
    Eigen::MatrixXd a(window, degree + 1);
    for (int i = 0; i < window; ++i) {
        const double t = (first + i - at) / h;
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            a(i, j) = p;
            p *= t;
        }
    }
    return a;
}

// Weights that map the window values to the fitted value at `at`.
Eigen::VectorXd weights(int window, int degree, int first, int at) {
    const double h = std::max(1, window / 2);
    const Eigen::MatrixXd a = design(window, degree, first, at, h);
    const Eigen::MatrixXd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
    return pinv.row(0).transpose();
}

}  // namespace

std::vector<double> savitzky_golay_smooth(std::span<const double> y, int window, int degree) {
    check_sg(y.size(), window, degree);
    const int n = static_cast<int>(y.size());
    const int half = window / 2;
    // Coefficient sets: index 0..half-1 head, half centre, half+1..window-1 tail.
    std::vector<Eigen::VectorXd> coef(window);
    for (int k = 0; k < window; ++k) coef[k] = weights(window, degree, 0, k);

    std::vector<double> out(y.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        int first = i - half;
        int k = half;
        if (i < half) {
            first = 0;
            k = i;
        } else if (i >= n - half) {
            first = n - window;
            k = i - first;
        }
        double s = 0.0;
        for (int j = 0; j < window; ++j) s += coef[k](j) * y[first + j];
        out[i] = s;
    }
    return out;
}

std::vector<double> savitzky_golay_smooth_serial(std::span<const double> y, int window, int degree) {
    check_sg(y.size(), window, degree);
    const int n = static_cast<int>(y.size());
    const int half = window / 2;
    std::vector<double> out(y.size());
    for (int i = 0; i < n; ++i) {
        const int first = std::clamp(i - half, 0, n - window);
        const Eigen::MatrixXd a = design(window, degree, first, i, std::max(1, half));
        const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data() + first, window);
        const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
        out[i] = c(0);
    }
    return out;
}

}  // namespace cdl
