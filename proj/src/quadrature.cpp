#include "tlsgap/quadrature.hpp"

#include <algorithm>
#include <vector>

namespace tlsgap {

namespace {

// Kronrod 15 nodes/weights on [-1,1] and the embedded Gauss 7 weights.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double a, b, value, error;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(c);
    double res_k = kWgk[7] * fc;
    double res_g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        res_k += kWgk[i] * fsum;
        if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
    }
    res_k *= half;
    res_g *= half;
    return {a, b, res_k, std::abs(res_k - res_g)};
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double abs_tol,
                    const std::vector<double>* break_points) {
    std::vector<double> edges{a, b};
    if (break_points) {
        for (double x : *break_points)
            if (x > a && x < b) edges.push_back(x);
        std::sort(edges.begin(), edges.end());
    }

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        panels.push_back(eval_panel(f, edges[i], edges[i + 1]));

    while (true) {
        double total = 0, err = 0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
        if (panels.size() > 4000)
            throw std::runtime_error("integrate_gk: refinement limit reached");
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = eval_panel(f, p.a, mid);
        panels.push_back(eval_panel(f, mid, p.b));
    }
}

} // namespace tlsgap
