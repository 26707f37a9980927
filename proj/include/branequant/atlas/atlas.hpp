#pragma once

#include <optional>

#include "branequant/atlas/chart_checks.hpp"
#include "branequant/lattice/siegel.hpp"

namespace bq {

// Gluing map from the source chart to the target chart: x_t = A(x_s + b),
// y_t = A^{-T} y_s, complex coordinates z_t = A(z_s + b + ic), and sections
// s_t = e^{2πi G} s_s with G written in source (x, y).
struct Transition {
    std::string target, source, label;
    TwistedSymplectic a;
    std::vector<Rational> b;
    std::vector<Rational> c;
    RatPolynomial gauge_exponent;

    AffineChange change() const { return {a.a, b}; }

    // c = H(Aᵀ g_t(x_t) − g_s(x_s)) must be constant on the overlap.
    static Transition make(const BraneChart& target, const BraneChart& source, std::string label, IntMatrix a,
                           std::vector<Rational> b, RatPolynomial gauge) {
        if (!(*target.form == *source.form)) throw Error(Errc::ChartMismatch, "charts glued by a transition must share 𝑯");
        const int d = source.dim();
        if (static_cast<int>(b.size()) != d || gauge.nvars() != xy_vars(source.n()))
            throw Error(Errc::InvalidArgument, "transition data has wrong arity");
        auto tw = TwistedSymplectic::make(std::move(a), source.form);
        AffineChange ch{tw.a, b};
        auto img = ch.images(false);
        std::vector<RatPolynomial> xs_img(img.begin(), img.begin() + d);
        std::vector<RatPolynomial> gt;
        for (const auto& p : target.g) gt.push_back(p.embed(xy_vars(source.n()), detail_slots(d)).substitute(img));
        RatMatrix at = to_rational(tw.a).transpose();
        RatMatrix h = to_rational(source.form->normal_form());
        std::vector<RatPolynomial> diff(static_cast<size_t>(d), RatPolynomial(xy_vars(source.n())));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                if (at(i, j) != 0) diff[static_cast<size_t>(i)] += gt[static_cast<size_t>(j)] * at(i, j);
            diff[static_cast<size_t>(i)] -= source.g[static_cast<size_t>(i)].embed(xy_vars(source.n()), detail_slots(d));
        }
        std::vector<Rational> c(static_cast<size_t>(d), Rational(0));
        for (int i = 0; i < d; ++i) {
            RatPolynomial ci(xy_vars(source.n()));
            for (int j = 0; j < d; ++j)
                if (h(i, j) != 0) ci += diff[static_cast<size_t>(j)] * h(i, j);
            if (ci.total_degree() > 0) throw Error(Errc::InvalidArgument, "imaginary shift c is not constant on the overlap");
            c[static_cast<size_t>(i)] = ci.coefficient(std::vector<int>(static_cast<size_t>(ci.nvars()), 0));
        }
        return {target.id, source.id, std::move(label), std::move(tw), std::move(b), std::move(c), std::move(gauge)};
    }

    static std::vector<int> detail_slots(int d) {
        std::vector<int> s(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) s[static_cast<size_t>(i)] = i;
        return s;
    }

    // Reverse gluing: A⁻¹, −Ab, −G expressed in the old target coordinates.
    Transition inverse(std::string new_label = {}) const {
        AffineChange inv = change().inverse_change();
        RatPolynomial g = -pull_back_function(gauge_exponent, inv);
        std::vector<Rational> nc(c.size(), Rational(0));
        for (int i = 0; i < a.a.rows(); ++i)
            for (int j = 0; j < a.a.cols(); ++j) nc[static_cast<size_t>(i)] -= Rational(a.a(i, j)) * c[static_cast<size_t>(j)];
        return {source, target, new_label.empty() ? label + "^-1" : std::move(new_label), TwistedSymplectic{inv.a, a.form}, inv.b, nc,
                std::move(g)};
    }
};

struct TransitionKey {
    std::string target, source, label;
    friend bool operator==(const TransitionKey&, const TransitionKey&) = default;
};

// φ_ab ∘ φ_bc against φ_ac (or the identity when ac is empty, which needs a = c),
// checked at points (x, y) of chart c.
struct CocycleTriple {
    TransitionKey ab, bc;
    std::optional<TransitionKey> ac;
    std::vector<std::vector<double>> samples;
};

// Sector r ∈ (r0, r1), θ ∈ (t0, t1) in the standard coordinates of ℝ², or an
// axis box when `polar` is false.
struct Region {
    bool polar = false;
    double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
};

struct BraneAtlas {
    std::string name;
    std::vector<ChartPtr> charts;
    std::vector<Region> regions;  // one per chart
    std::vector<Transition> transitions;
    std::vector<CocycleTriple> triples;
    std::vector<std::string> notes;

    const Transition* find(const TransitionKey& k) const {
        for (const auto& t : transitions)
            if (t.target == k.target && t.source == k.source && t.label == k.label) return &t;
        return nullptr;
    }
    const BraneChart* chart(const std::string& id) const {
        for (const auto& c : charts)
            if (c->id == id) return c.get();
        return nullptr;
    }
};

struct CocycleEntry {
    std::string description;
    double affine_defect = 0.0;  // 0 or the largest mismatch of (A, b, c)
    double gauge_defect = 0.0;   // max distance of the composed gauge exponent to ℤ
    int samples = 0;
};

struct CocycleReport {
    double max_defect = 0.0;
    std::vector<CocycleEntry> entries;
};

namespace detail {

inline double rational_vec_gap(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(to_double(a[i] - b[i])));
    return worst;
}

inline double dist_to_integer(double v) { return std::abs(v - std::round(v)); }

}  // namespace detail

// Composes affine parts exactly and gauge exponents symbolically, then measures the
// composed gauge mod 1 at the stored sample points.
inline CocycleReport cocycle_check(const BraneAtlas& atlas) {
    CocycleReport rep;
    for (const auto& tr : atlas.triples) {
        const Transition* ab = atlas.find(tr.ab);
        const Transition* bc = atlas.find(tr.bc);
        const Transition* ac = tr.ac ? atlas.find(*tr.ac) : nullptr;
        if (!ab || !bc || (tr.ac && !ac)) throw Error(Errc::MissingOverlap, "cocycle triple refers to a missing transition");
        if (tr.samples.empty()) throw Error(Errc::MissingOverlap, "cocycle triple has no sample points");
        if (ab->source != bc->target) throw Error(Errc::MissingOverlap, "transitions do not compose");
        const int d = bc->a.a.rows();
        CocycleEntry e;
        e.description = tr.ab.label + " * " + tr.bc.label + " vs " + (tr.ac ? tr.ac->label : std::string("id"));
        AffineChange comp = ab->change().compose(bc->change());
        AffineChange want = ac ? ac->change() : AffineChange::identity(d);
        if (!ac && ab->target != bc->source) throw Error(Errc::MissingOverlap, "identity comparison needs a closed loop");
        // c composes like b.
        std::vector<Rational> cc = bc->c;
        RatMatrix bcinv = inverse(to_rational(bc->a.a));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) cc[static_cast<size_t>(i)] += bcinv(i, j) * ab->c[static_cast<size_t>(j)];
        std::vector<Rational> want_c = ac ? ac->c : std::vector<Rational>(static_cast<size_t>(d), Rational(0));
        if (comp.a != want.a) e.affine_defect = 1.0;
        e.affine_defect = std::max({e.affine_defect, detail::rational_vec_gap(comp.b, want.b), detail::rational_vec_gap(cc, want_c)});

        RatPolynomial g = pull_back_function(ab->gauge_exponent, bc->change()) + bc->gauge_exponent;
        if (ac) g -= ac->gauge_exponent;
        for (const auto& p : tr.samples) {
            e.gauge_defect = std::max(e.gauge_defect, detail::dist_to_integer(g.evaluate<double>(p)));
            ++e.samples;
        }
        rep.max_defect = std::max({rep.max_defect, e.affine_defect, e.gauge_defect});
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// Pull the target's skew-Smith model back through the transition and compare with
// the gauged source model. Exact.
inline ModelComparison transition_consistency(const BraneAtlas& atlas, const Transition& t) {
    const BraneChart* tc = atlas.chart(t.target);
    const BraneChart* sc = atlas.chart(t.source);
    if (!tc || !sc) throw Error(Errc::MissingOverlap, "transition refers to an unknown chart");
    return compare_models(skew_smith_model(*tc).pulled_back(t.change()), skew_smith_model(*sc).gauged(t.gauge_exponent));
}

// Deterministic points (x, y) inside a region: x on a stratified polar or box grid,
// y on an irrational rotation of the unit square.
inline std::vector<std::vector<double>> region_samples(const Region& r, int count, int n = 1) {
    std::vector<std::vector<double>> out;
    const int d = 2 * n;
    const int rows = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(count))));
    for (int s = 0; s < count; ++s) {
        const double u = (s % rows + 0.5) / rows;
        const double v = (s / rows + 0.5) / ((count + rows - 1) / rows);
        const double p0 = r.lo0 + (r.hi0 - r.lo0) * (0.05 + 0.9 * u);
        const double p1 = r.lo1 + (r.hi1 - r.lo1) * (0.05 + 0.9 * v);
        std::vector<double> pt(static_cast<size_t>(2 * d), 0.0);
        if (r.polar) {
            pt[0] = p0 * std::cos(p1);
            pt[1] = p0 * std::sin(p1);
        } else {
            pt[0] = p0;
            pt[1] = p1;
        }
        for (int i = 2; i < d; ++i) pt[static_cast<size_t>(i)] = 0.1 * i;
        for (int i = 0; i < d; ++i) {
            const double w = (s + 1) * (0.6180339887498949 + 0.1 * i);
            pt[static_cast<size_t>(d + i)] = w - std::floor(w);
        }
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace bq
