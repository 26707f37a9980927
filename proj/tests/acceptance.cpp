// One line per acceptance criterion. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "branequant/verify/suites.hpp"

using namespace bq;
using namespace bq::verify;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::pair<std::string, std::string>> groups;  // (suite, group)
    std::vector<std::string> prefixes;                         // check names that belong here
    double budget_s = 0.0;                                     // 0: no runtime limit
};

bool matches(const std::string& test, const std::vector<std::string>& prefixes) {
    for (const auto& p : prefixes)
        if (test.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main() {
    RunConfig cfg;  // seed 42, G = 256, Q = 10
    const std::vector<Criterion> criteria{
        {1, "mirror homomorphism", {{"mirror", "homomorphism"}}, {"mirror.homomorphism["}, 10.0},
        {2, "closed-form vs quadrature Toeplitz", {{"mirror", "toeplitz_quadrature"}}, {"mirror.toeplitz_quadrature"}, 60.0},
        {3, "theta orthonormality and cross-moduli pairing", {{"theta", "gram"}}, {"theta.gram"}, 30.0},
        {4, "BKS laws", {{"bks", "laws"}}, {"bks."}, 0.0},
        {5, "DGA laws", {{"dga", "laws"}}, {"dga."}, 0.0},
        {6, "Dolbeault intertwining", {{"mirror", "dolbeault_intertwining"}}, {"mirror.dolbeault_intertwining"}, 0.0},
        {7, "curvature", {{"mirror", "curvature"}}, {"mirror.curvature"}, 0.0},
        {8, "round-trip reconstruction", {{"mirror", "reconstruct"}}, {"mirror.reconstruct"}, 0.0},
        {9, "Siegel frame transport and action", {{"siegel", "identities"}}, {"siegel."}, 0.0},
        {10, "atlas suite", {{"atlas", "examples"}}, {"atlas.validate_chart", "atlas.invariant_factors", "atlas.cocycle", "atlas.coframe"}, 0.0},
        {11, "dimension law", {{"theta", "dimension_law"}}, {"theta.dimension_law"}, 0.0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        std::vector<CheckResult> checks;
        auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            for (const auto& [suite, name] : c.groups)
                for (const auto& g : groups())
                    if (g.suite == suite && g.name == name) {
                        auto r = run_group(g, cfg);
                        for (auto& x : r)
                            if (matches(x.test, c.prefixes)) checks.push_back(std::move(x));
                    }
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        bool ok = error.empty() && !checks.empty();
        double worst_ratio = 0.0;
        const CheckResult* worst = nullptr;
        std::vector<const CheckResult*> bad;
        for (const auto& x : checks) {
            if (!x.pass) {
                ok = false;
                bad.push_back(&x);
            }
            double ratio = x.exact ? (x.residual == 0.0 ? 0.0 : 1e300) : x.residual / x.tolerance;
            if (!worst || ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = &x;
            }
        }
        const bool in_time = c.budget_s == 0.0 || secs <= c.budget_s;
        ok = ok && in_time;
        if (!ok) ++failed;

        std::printf("criterion %2d %-46s %s  checks=%zu", c.id, c.title.c_str(), ok ? "PASS" : "FAIL", checks.size());
        if (worst) {
            if (worst->exact) std::printf("  worst=%s (%s)", worst->test.c_str(), worst->residual == 0.0 ? "exact" : "mismatch");
            else std::printf("  worst=%s residual=%.3g tol=%.3g", worst->test.c_str(), worst->residual, worst->tolerance);
        }
        std::printf("  time=%.2fs", secs);
        if (c.budget_s > 0) std::printf(" (budget %.0fs%s)", c.budget_s, in_time ? "" : ", exceeded");
        if (!error.empty()) std::printf("  error=%s", error.c_str());
        std::printf("\n");
        for (const auto* b : bad) {
            std::printf("    failed: %s residual=%.6g tol=%.3g", b->test.c_str(), b->residual, b->tolerance);
            if (!b->observed.is_null()) std::printf(" observed=%s", b->observed.dump().c_str());
            std::printf("\n");
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
