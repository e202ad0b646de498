#include "emopeak/classifiers.hpp"

#include <algorithm>
#include <cmath>

// Built with -ffast-math (see src/CMakeLists.txt) so the exp loop vectorizes; nothing here relies on inf/NaN.

namespace emopeak {

SoftmaxLayer fit_softmax(const Matrix& inputs, const std::vector<std::size_t>& y, std::size_t n_classes,
                         const SoftmaxFitOptions& options)
{
    const std::size_t n = inputs.size();
    const std::size_t m = inputs.front().size() + 1;
    const std::size_t k = n_classes;

    // Column-major design (feature j of record i at cols[j * n + i]) so every inner loop runs over records
    // and vectorizes; column 0 is the bias.
    std::vector<double> cols(m * n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j < m; ++j)
            cols[j * n + i] = inputs[i][j - 1];
    std::vector<double> onehot(k * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        onehot[y[i] * n + i] = 1.0;

    std::vector<double> w(k * m, 0.0);
    std::vector<double> grad(k * m);
    std::vector<double> scores(k * n);
    std::vector<double> top(n);
    std::vector<double> total(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::size_t iterations_run = 0;
    for (std::size_t it = 0; it < options.iterations; ++it) {
        for (std::size_t c = 0; c < k; ++c) {
            double* s = &scores[c * n];
            const double* wc = &w[c * m];
            for (std::size_t i = 0; i < n; ++i)
                s[i] = wc[0];
            for (std::size_t j = 1; j < m; ++j) {
                const double* xj = &cols[j * n];
                const double wj = wc[j];
                for (std::size_t i = 0; i < n; ++i)
                    s[i] += wj * xj[i];
            }
        }
        std::copy(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(n), top.begin());
        for (std::size_t c = 1; c < k; ++c) {
            const double* s = &scores[c * n];
            for (std::size_t i = 0; i < n; ++i)
                top[i] = std::max(top[i], s[i]);
        }
        std::fill(total.begin(), total.end(), 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            double* s = &scores[c * n];
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = std::exp(s[i] - top[i]);
                total[i] += s[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            total[i] = 1.0 / total[i];

        double norm2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            double* s = &scores[c * n];
            const double* t = &onehot[c * n];
            for (std::size_t i = 0; i < n; ++i)
                s[i] = s[i] * total[i] - t[i];
            for (std::size_t j = 0; j < m; ++j) {
                const double* xj = &cols[j * n];
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    acc += s[i] * xj[i];
                double g = acc * inv_n;
                if (j > 0)
                    g += options.ridge * w[c * m + j];
                grad[c * m + j] = g;
                norm2 += g * g;
            }
        }
        if (std::sqrt(norm2) < options.tolerance)
            break;
        for (std::size_t idx = 0; idx < w.size(); ++idx)
            w[idx] -= options.step * grad[idx];
        iterations_run = it + 1;
    }

    SoftmaxLayer layer;
    layer.iterations_run = iterations_run;
    layer.weights.assign(k, std::vector<double>(m));
    for (std::size_t c = 0; c < k; ++c)
        std::copy(w.begin() + static_cast<std::ptrdiff_t>(c * m), w.begin() + static_cast<std::ptrdiff_t>((c + 1) * m),
                  layer.weights[c].begin());
    return layer;
}

}  // namespace emopeak
