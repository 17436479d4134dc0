// Decreasing-diagram machinery: elementary diagram joins, local
// decreasingness, labelling searches. Cross-checked against an independent
// matrix-closure join oracle and the core property checkers.
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"

using namespace rewr;
using namespace testutil;

namespace {

constexpr std::uint64_t kNoBudget = ~std::uint64_t{0};

LabelledArs all_zero(const Ars& a, Label k = 1) {
    std::vector<LabelledEdge> edges;
    for (const Edge& e : a.edges()) edges.push_back({e.src, e.dst, 0});
    return LabelledArs(a.n_nodes(), k, std::move(edges));
}

LabelledCommArs all_zero_comm(const CommArs& c, Label k = 1) {
    std::vector<LabelledEdge> fwd, snd;
    for (const Edge& e : c.fwd()) fwd.push_back({e.src, e.dst, 0});
    for (const Edge& e : c.snd()) snd.push_back({e.src, e.dst, 0});
    return LabelledCommArs(c.n_nodes(), k, std::move(fwd), std::move(snd));
}

// a2=0? No: a1=0, a2=1, a3=2, c=3, b2=4, b3=5, b1=6 (two relations on 7 nodes
// whose every coinitial pair closes with single opposite-relation steps).
CommArs tiny_comm_grid() {
    return CommArs(7, {{0, 1}, {1, 3}, {2, 3}, {4, 3}, {5, 3}, {6, 5}},
                   {{0, 2}, {1, 3}, {2, 3}, {4, 3}, {5, 3}, {6, 4}});
}

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix mat_mul(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool v = false;
            for (std::size_t t = 0; t < n && !v; ++t) v = a[i][t] && b[t][j];
            r[i][j] = v;
        }
    return r;
}

// Reflexive-transitive closure by Floyd-Warshall.
BoolMatrix mat_star(BoolMatrix m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) m[i][i] = true;
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (m[i][t] && m[t][j]) m[i][j] = true;
    return m;
}

BoolMatrix step_matrix(NodeId n, const std::vector<LabelledEdge>& edges,
                       const std::function<bool(Label)>& keep) {
    BoolMatrix m(n, std::vector<bool>(n, false));
    for (const auto& e : edges)
        if (keep(e.label)) m[e.src][e.dst] = true;
    return m;
}

// Independent oracle: the side relation "prefix(<own) middle(=other)?
// suffix(<max)" as a product of matrix closures.
BoolMatrix side_relation(NodeId n, const std::vector<LabelledEdge>& edges, Label own,
                         Label other, Label maxl) {
    BoolMatrix prefix = mat_star(step_matrix(n, edges, [&](Label l) { return l < own; }));
    BoolMatrix middle = step_matrix(n, edges, [&](Label l) { return l == other; });
    for (NodeId i = 0; i < n; ++i) middle[i][i] = true;  // middle is optional
    BoolMatrix suffix = mat_star(step_matrix(n, edges, [&](Label l) { return l < maxl; }));
    return mat_mul(mat_mul(prefix, middle), suffix);
}

bool oracle_peak_joinable(NodeId n, const std::vector<LabelledEdge>& left_edges,
                          const std::vector<LabelledEdge>& right_edges, const Peak& peak) {
    const Label a = peak.left.label, b = peak.right.label;
    const Label m = std::max(a, b);
    BoolMatrix left = side_relation(n, left_edges, a, b, m);
    BoolMatrix right = side_relation(n, right_edges, b, a, m);
    for (NodeId d = 0; d < n; ++d)
        if (left[peak.left.dst][d] && right[peak.right.dst][d]) return true;
    return false;
}

bool oracle_joinable(const LabelledArs& sys, const Peak& peak) {
    return oracle_peak_joinable(sys.n_nodes(), sys.edges(), sys.edges(), peak);
}

bool oracle_joinable_comm(const LabelledCommArs& sys, const Peak& peak) {
    // Left side (forward-step target) travels in the second relation.
    return oracle_peak_joinable(sys.n_nodes(), sys.snd(), sys.fwd(), peak);
}

std::vector<Peak> all_peaks(const LabelledArs& sys) {
    std::vector<Peak> out;
    const auto& es = sys.edges();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (es[i].src == es[j].src)
                out.push_back(Peak{es[i].src,
                                   {es[i].dst, es[i].label, Rel::fwd},
                                   {es[j].dst, es[j].label, Rel::fwd}});
    return out;
}

std::vector<Peak> all_peaks_comm(const LabelledCommArs& sys) {
    std::vector<Peak> out;
    for (const auto& f : sys.fwd())
        for (const auto& s : sys.snd())
            if (f.src == s.src)
                out.push_back(Peak{f.src,
                                   {f.dst, f.label, Rel::fwd},
                                   {s.dst, s.label, Rel::snd}});
    return out;
}

// Every 2-labelling of `a`, in label-vector order.
void for_each_two_labelling(const Ars& a, const std::function<void(const LabelledArs&)>& fn) {
    const std::size_t e = a.edges().size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
        std::vector<LabelledEdge> edges;
        for (std::size_t i = 0; i < e; ++i)
            edges.push_back({a.edges()[i].src, a.edges()[i].dst,
                             static_cast<Label>((mask >> i) & 1)});
        fn(LabelledArs(a.n_nodes(), 2, std::move(edges)));
    }
}

}  // namespace

TEST_CASE("labelled system constructors validate their input") {
    CHECK_THROWS_AS(LabelledArs(2, 1, {{0, 1, 1}}), std::invalid_argument);  // label >= k
    CHECK_THROWS_AS(LabelledArs(2, 0, {{0, 1, 0}}), std::invalid_argument);  // k=0 with edges
    CHECK_NOTHROW(LabelledArs(2, 0, {}));
    CHECK_THROWS_AS(LabelledArs(2, 2, {{0, 1, 0}, {0, 1, 0}}), std::invalid_argument);
    CHECK_NOTHROW(LabelledArs(2, 2, {{0, 1, 0}, {0, 1, 1}}));  // multi-label pair is fine
    CHECK_THROWS_AS(LabelledCommArs(2, 1, {{0, 2, 0}}, {}), std::invalid_argument);

    CHECK(LabelledArs(2, 2, {{0, 1, 0}, {0, 1, 1}}).project() == Ars(2, {{0, 1}}));
    CHECK(all_zero_comm(tiny_comm_grid()).project() == tiny_comm_grid());
}

TEST_CASE("elementary diagram join on the all-zero diamond") {
    LabelledArs sys = all_zero(e_dia());
    Peak peak{0, {1, 0, Rel::fwd}, {2, 0, Rel::fwd}};
    auto cert = decreasing_join_exists(sys, peak);
    REQUIRE(cert.has_value());
    CHECK(cert->meet == 3);
    // With both peak labels 0 the phase-A closures are empty, so each side is
    // exactly one middle step.
    CHECK(cert->left.prefix.empty());
    REQUIRE(cert->left.middle.has_value());
    CHECK(*cert->left.middle == LabelledStep{1, 3, 0});
    CHECK(cert->left.suffix.empty());
    REQUIRE(cert->right.middle.has_value());
    CHECK(*cert->right.middle == LabelledStep{2, 3, 0});
    CHECK(certificate_valid(sys, peak, *cert));

    // Tampered certificates are rejected.
    JoinCertificate bad = *cert;
    bad.meet = 2;
    CHECK(!certificate_valid(sys, peak, bad));
    bad = *cert;
    bad.left.middle->label = 1;
    CHECK(!certificate_valid(sys, peak, bad));
    bad = *cert;
    bad.left.middle = std::nullopt;
    CHECK(!certificate_valid(sys, peak, bad));
    bad = *cert;
    bad.right.suffix.push_back({3, 3, 0});
    CHECK(!certificate_valid(sys, peak, bad));
}

TEST_CASE("peaks without common reducts never close") {
    for (Label k = 1; k <= 2; ++k) {
        for_each_two_labelling(e_peak(), [&](const LabelledArs& sys) {
            for (const Peak& p : all_peaks(sys))
                CHECK(!decreasing_join_exists(sys, p).has_value());
        });
        (void)k;
    }
    LabelledArs sys = all_zero(e_peak());
    CHECK_THROWS_AS(decreasing_join_exists(sys, Peak{0, {1, 0, Rel::fwd}, {2, 1, Rel::fwd}}),
                    std::invalid_argument);  // right step not in the system
}

TEST_CASE("a middle tile with distinct labels closes as prefix/middle/suffix") {
    // a=0, b=1, c=2, b1=3, d=4
    LabelledArs sys(5, 2, {{0, 1, 0}, {0, 2, 1}, {1, 3, 1}, {3, 4, 0}, {2, 4, 0}});
    Peak peak{0, {1, 0, Rel::fwd}, {2, 1, Rel::fwd}};
    auto cert = decreasing_join_exists(sys, peak);
    REQUIRE(cert.has_value());
    CHECK(cert->meet == 4);
    REQUIRE(cert->left.middle.has_value());
    CHECK(*cert->left.middle == LabelledStep{1, 3, 1});
    CHECK(cert->left.suffix == std::vector<LabelledStep>{{3, 4, 0}});
    CHECK(certificate_valid(sys, peak, *cert));
    CHECK(oracle_joinable(sys, peak));

    CHECK(is_locally_decreasing(sys).decreasing);
    // Not expressible with 0-only joins: the left side must take a 1-step.
    auto simple = verify_simple_01(sys);
    CHECK(!simple.decreasing);
    REQUIRE(simple.witness.has_value());
    CHECK(simple.witness->apex == 0);
}

TEST_CASE("local decreasingness on the fixtures") {
    CHECK(is_locally_decreasing(all_zero(e_dia())).decreasing);
    CHECK(is_locally_decreasing(all_zero(e_ab())).decreasing);
    CHECK(is_locally_decreasing(all_zero(e_cyc2())).decreasing);
    auto r = is_locally_decreasing(all_zero(e_peak()));
    CHECK(!r.decreasing);
    REQUIRE(r.witness.has_value());
    CHECK(*r.witness == Peak{0, {1, 0, Rel::fwd}, {2, 0, Rel::fwd}});
}

TEST_CASE("join decisions match the matrix-closure oracle on all labelled 3-node systems") {
    for_each_ars(3, [&](const Ars& a) {
        for_each_two_labelling(a, [&](const LabelledArs& sys) {
            for (const Peak& p : all_peaks(sys)) {
                auto cert = decreasing_join_exists(sys, p);
                REQUIRE(cert.has_value() == oracle_joinable(sys, p));
                if (cert) REQUIRE(certificate_valid(sys, p, *cert));
            }
        });
    });
}

TEST_CASE("locally decreasing labelled systems are confluent (soundness)") {
    std::uint64_t decreasing_count = 0;
    for (NodeId n = 1; n <= 3; ++n) {
        for_each_ars(n, [&](const Ars& a) {
            for_each_two_labelling(a, [&](const LabelledArs& sys) {
                if (is_locally_decreasing(sys).decreasing) {
                    ++decreasing_count;
                    REQUIRE(check(sys.project(), Property::CR).holds);
                }
                if (verify_simple_01(sys).decreasing)
                    REQUIRE(is_locally_decreasing(sys).decreasing);
            });
        });
    }
    CHECK(decreasing_count > 1000);  // the sweep actually exercised the implication

    // Sampled larger systems.
    std::mt19937 rng(20260819);
    for (int i = 0; i < 300; ++i) {
        Ars a = random_ars(4 + i % 2, rng);
        std::vector<LabelledEdge> edges;
        for (const Edge& e : a.edges())
            edges.push_back({e.src, e.dst, static_cast<Label>(rng() % 3)});
        LabelledArs sys(a.n_nodes(), 3, std::move(edges));
        if (is_locally_decreasing(sys).decreasing)
            REQUIRE(check(sys.project(), Property::CR).holds);
    }
}

TEST_CASE("locally decreasing commutation systems commute (soundness)") {
    for_each_ars(2, [&](const Ars& fwd) {
        for_each_ars(2, [&](const Ars& snd) {
            CommArs comm(2, fwd.edges(), snd.edges());
            LabelledCommArs sys = all_zero_comm(comm, 2);
            // all 2-labellings of both relations
            const auto& f0 = sys.fwd();
            const auto& s0 = sys.snd();
            const std::size_t ef = f0.size(), es = s0.size();
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (ef + es)); ++mask) {
                std::vector<LabelledEdge> f = f0, s = s0;
                for (std::size_t i = 0; i < ef; ++i) f[i].label = (mask >> i) & 1;
                for (std::size_t i = 0; i < es; ++i) s[i].label = (mask >> (ef + i)) & 1;
                LabelledCommArs lab(2, 2, std::move(f), std::move(s));
                for (const Peak& p : all_peaks_comm(lab)) {
                    auto cert = decreasing_join_exists(lab, p);
                    REQUIRE(cert.has_value() == oracle_joinable_comm(lab, p));
                    if (cert) REQUIRE(certificate_valid(lab, p, *cert));
                }
                if (is_locally_decreasing_comm(lab).decreasing)
                    REQUIRE(check_commutation(lab.project()).holds);
            }
        });
    });

    std::mt19937 rng(77);
    for (int i = 0; i < 200; ++i) {
        Ars fwd = random_ars(3, rng), snd = random_ars(3, rng);
        std::vector<LabelledEdge> f, s;
        for (const Edge& e : fwd.edges())
            f.push_back({e.src, e.dst, static_cast<Label>(rng() % 2)});
        for (const Edge& e : snd.edges())
            s.push_back({e.src, e.dst, static_cast<Label>(rng() % 2)});
        LabelledCommArs lab(3, 2, std::move(f), std::move(s));
        for (const Peak& p : all_peaks_comm(lab))
            REQUIRE(decreasing_join_exists(lab, p).has_value() == oracle_joinable_comm(lab, p));
        if (is_locally_decreasing_comm(lab).decreasing)
            REQUIRE(check_commutation(lab.project()).holds);
    }
}

TEST_CASE("labelling search on the fixtures") {
    auto dia = dcr_search(e_dia(), 1, kNoBudget);
    REQUIRE(dia.labelling.has_value());
    CHECK(*dia.labelling == all_zero(e_dia()));

    auto ab = dcr_search(e_ab(), 1, kNoBudget);
    REQUIRE(ab.labelling.has_value());
    CHECK(*ab.labelling == all_zero(e_ab()));

    for (Label k = 1; k <= 2; ++k) {
        auto peak = dcr_search(e_peak(), k, kNoBudget);
        CHECK(!peak.labelling.has_value());
        CHECK(peak.exhausted);
        auto multi = dcr_search(e_peak(), k, kNoBudget, true);
        CHECK(!multi.labelling.has_value());
        CHECK(multi.exhausted);
    }

    // A tiny budget aborts with the question open.
    auto out_of_gas = dcr_search(e_dia(), 1, 1);
    CHECK(!out_of_gas.labelling.has_value());
    CHECK(!out_of_gas.exhausted);
}

TEST_CASE("commutation labelling search on the fixtures") {
    auto grid = dc_search(tiny_comm_grid(), 1, kNoBudget);
    REQUIRE(grid.labelling.has_value());
    CHECK(*grid.labelling == all_zero_comm(tiny_comm_grid()));
    CHECK(is_locally_decreasing_comm(*grid.labelling).decreasing);

    // Relation directions matter: the left join side must travel in the
    // second relation. This square closes exactly that way.
    CommArs square(4, {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}});
    auto sq = dc_search(square, 1, kNoBudget);
    REQUIRE(sq.labelling.has_value());
    CHECK(is_locally_decreasing_comm(*sq.labelling).decreasing);

    // The mirrored wiring cannot commute at all.
    CommArs bad(4, {{0, 1}, {1, 3}}, {{0, 2}, {2, 3}});
    CHECK(!check_commutation(bad).holds);
    for (Label k = 1; k <= 3; ++k) {
        auto r = dc_search(bad, k, kNoBudget);
        CHECK(!r.labelling.has_value());
        CHECK(r.exhausted);
    }

    CommArs fork(3, {{0, 1}}, {{0, 2}});
    for (Label k = 1; k <= 3; ++k) {
        auto r = dc_search(fork, k, kNoBudget);
        CHECK(!r.labelling.has_value());
        CHECK(r.exhausted);
    }
}

TEST_CASE("search agrees with brute force whenever it reports exhaustion") {
    for_each_ars(3, [&](const Ars& a) {
        if (a.edges().size() > 6) return;
        bool brute = false;
        for_each_two_labelling(a, [&](const LabelledArs& sys) {
            brute = brute || is_locally_decreasing(sys).decreasing;
        });
        auto r = dcr_search(a, 2, kNoBudget);
        REQUIRE(r.labelling.has_value() == brute);
        if (!r.labelling) REQUIRE(r.exhausted);
        if (r.labelling) {
            REQUIRE(is_locally_decreasing(*r.labelling).decreasing);
            REQUIRE(r.labelling->label_count() == 2);
            // found with k labels => found with k+1
            auto r3 = dcr_search(a, 3, kNoBudget);
            REQUIRE(r3.labelling.has_value());
            REQUIRE(is_locally_decreasing(*r3.labelling).decreasing);
        }
    });
}

TEST_CASE("multi-label search subsumes single labels on tiny systems") {
    for_each_ars(2, [&](const Ars& a) {
        auto single = dcr_search(a, 2, kNoBudget);
        auto multi = dcr_search(a, 2, kNoBudget, true);
        if (single.labelling) {
            REQUIRE(multi.labelling.has_value());
            REQUIRE(is_locally_decreasing(*multi.labelling).decreasing);
        }
    });
}

TEST_CASE("stripping the top label keeps systems decreasing") {
    LabelledArs dia = all_zero(e_dia());
    LabelledArs stripped = strip_max_label(dia);
    CHECK(stripped.n_nodes() == 4);
    CHECK(stripped.label_count() == 0);
    CHECK(stripped.edges().empty());
    CHECK_THROWS_AS(strip_max_label(stripped), std::invalid_argument);  // nothing to strip

    LabelledArs ab = all_zero(e_ab());
    CHECK(strip_max_label(ab).edges().empty());

    CHECK_THROWS_AS(strip_max_label(all_zero(e_peak())), std::invalid_argument);  // not decreasing

    // Two-label systems found by search strip to decreasing one-label systems.
    std::mt19937 rng(99);
    int stripped_nontrivial = 0;
    for (int i = 0; i < 400; ++i) {
        Ars a = random_ars(3, rng);
        auto r = dcr_search(a, 2, kNoBudget);
        if (!r.labelling) continue;
        LabelledArs s = strip_max_label(*r.labelling);
        CHECK(s.label_count() == 1);
        CHECK(is_locally_decreasing(s).decreasing);
        if (!s.edges().empty()) ++stripped_nontrivial;
    }
    CHECK(stripped_nontrivial > 0);
}
