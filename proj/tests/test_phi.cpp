// The Phi commutation hierarchy: generator shape, witness labellings, the
// structural property checks, and the level-1 impossibility of one label.
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"
#include "rewr/phi.hpp"

using namespace rewr;
using namespace testutil;

namespace {

// Straight from the definition: out-degree at most one per node per relation.
bool deterministic_oracle(const CommArs& sys) {
    std::vector<int> f(sys.n_nodes(), 0), s(sys.n_nodes(), 0);
    for (const Edge& e : sys.fwd())
        if (++f[e.src] > 1) return false;
    for (const Edge& e : sys.snd())
        if (++s[e.src] > 1) return false;
    return true;
}

}  // namespace

TEST_CASE("the base system has the published shape") {
    PhiSystem p = phi(0);
    CHECK(p.level == 0);
    CHECK(p.comm.n_nodes() == 7);
    // Numbering a1,a2,a3,c,b2,b3,b1 = 0..6.
    CHECK(p.comm.fwd_ars() == Ars(7, {{0, 1}, {1, 3}, {2, 3}, {4, 3}, {5, 3}, {6, 5}}));
    CHECK(p.comm.snd_ars() == Ars(7, {{0, 2}, {1, 3}, {2, 3}, {4, 3}, {5, 3}, {6, 4}}));
    CHECK(p.a1 == 0);
    CHECK(p.a == 3);
    CHECK(p.c == 3);
    CHECK(p.b == 3);
    CHECK(p.b1 == 6);
}

TEST_CASE("each extension adds fourteen nodes and fourteen edges per relation") {
    PhiSystem p1 = phi(1);
    CHECK(p1.comm.n_nodes() == 21);
    CHECK(p1.comm.fwd().size() == 20);
    CHECK(p1.comm.snd().size() == 20);
    CHECK(p1.level == 1);
    CHECK(p1.a1 == 7);
    CHECK(p1.a == 0);
    CHECK(p1.c == 3);
    CHECK(p1.b == 6);
    CHECK(p1.b1 == 14);
    // Spot-check the wiring of level 1 (fresh a1..a7 = 7..13, b1..b7 = 14..20).
    auto has = [](const std::vector<Edge>& es, NodeId s, NodeId d) {
        for (const Edge& e : es)
            if (e.src == s && e.dst == d) return true;
        return false;
    };
    CHECK(has(p1.comm.fwd(), 7, 9));    // outer forward entry -> a3
    CHECK(has(p1.comm.fwd(), 13, 6));   // a7 -> previous second entry
    CHECK(has(p1.comm.fwd(), 11, 0));   // a5 -> previous forward entry
    CHECK(has(p1.comm.fwd(), 20, 0));   // b7 -> previous forward entry
    CHECK(has(p1.comm.fwd(), 19, 6));   // b6 -> previous second entry
    CHECK(has(p1.comm.snd(), 7, 8));    // outer second step a1 ~> a2
    CHECK(has(p1.comm.snd(), 13, 0));   // a7 ~> previous forward entry
    CHECK(has(p1.comm.snd(), 12, 6));   // a6 ~> previous second entry
    CHECK(has(p1.comm.snd(), 20, 6));   // b7 ~> previous second entry
    CHECK(has(p1.comm.snd(), 18, 0));   // b5 ~> previous forward entry

    PhiSystem p2 = phi(2);
    CHECK(p2.comm.n_nodes() == 35);
    CHECK(p2.comm.fwd().size() == 34);
    CHECK(p2.comm.snd().size() == 34);
    CHECK(p2.a1 == 21);
    CHECK(p2.a == 7);
    CHECK(p2.b == 14);
    CHECK(p2.b1 == 28);

    CHECK_THROWS_AS(phi(kMaxPhiLevel + 1), std::invalid_argument);
}

TEST_CASE("node names follow the level-tagged scheme") {
    auto names0 = phi_node_names(0);
    REQUIRE(names0.size() == 7);
    CHECK(names0[0] == std::pair<std::string, NodeId>{"a1", 0});
    CHECK(names0[1] == std::pair<std::string, NodeId>{"a2", 1});
    CHECK(names0[2] == std::pair<std::string, NodeId>{"a3", 2});
    CHECK(names0[3] == std::pair<std::string, NodeId>{"c", 3});
    CHECK(names0[4] == std::pair<std::string, NodeId>{"b2", 4});
    CHECK(names0[5] == std::pair<std::string, NodeId>{"b3", 5});
    CHECK(names0[6] == std::pair<std::string, NodeId>{"b1", 6});

    auto names2 = phi_node_names(2);
    REQUIRE(names2.size() == 35);
    CHECK(names2[7] == std::pair<std::string, NodeId>{"a1@1", 7});
    CHECK(names2[13] == std::pair<std::string, NodeId>{"a7@1", 13});
    CHECK(names2[14] == std::pair<std::string, NodeId>{"b1@1", 14});
    CHECK(names2[20] == std::pair<std::string, NodeId>{"b7@1", 20});
    CHECK(names2[21] == std::pair<std::string, NodeId>{"a1@2", 21});
    CHECK(names2[34] == std::pair<std::string, NodeId>{"b7@2", 34});
}

TEST_CASE("witness labellings match the published bands") {
    LabelledCommArs w0 = phi_witness_labelling(0);
    CHECK(w0.label_count() == 1);
    for (const LabelledEdge& e : w0.fwd()) CHECK(e.label == 0);
    for (const LabelledEdge& e : w0.snd()) CHECK(e.label == 0);
    CHECK(w0.project() == phi(0).comm);

    LabelledCommArs w1 = phi_witness_labelling(1);
    CHECK(w1.label_count() == 6);
    LabelledCommArs expected(
        21, 6,
        {
            // inner system
            {0, 1, 0}, {1, 3, 0}, {2, 3, 0}, {4, 3, 0}, {5, 3, 0}, {6, 5, 0},
            // a-side chain a1 -> a3 -> a4 -> a6 -> a7 -> b and crossings
            {7, 9, 5}, {9, 10, 4}, {10, 12, 3}, {12, 13, 2}, {13, 6, 1},
            {8, 11, 4}, {11, 0, 2},
            // b-side chain b1 -> b2 -> b4 -> b5 -> b7 -> a and crossings
            {14, 15, 5}, {15, 17, 4}, {17, 18, 3}, {18, 20, 2}, {20, 0, 1},
            {16, 19, 4}, {19, 6, 2},
        },
        {
            // inner system
            {0, 2, 0}, {1, 3, 0}, {2, 3, 0}, {4, 3, 0}, {5, 3, 0}, {6, 4, 0},
            // a-side chain a1 ~> a2 ~> a4 ~> a5 ~> a7 ~> a and crossings
            {7, 8, 5}, {8, 10, 4}, {10, 11, 3}, {11, 13, 2}, {13, 0, 1},
            {9, 12, 4}, {12, 6, 2},
            // b-side chain b1 ~> b3 ~> b4 ~> b6 ~> b7 ~> b and crossings
            {14, 16, 5}, {16, 17, 4}, {17, 19, 3}, {19, 20, 2}, {20, 6, 1},
            {15, 18, 4}, {18, 0, 2},
        });
    CHECK(w1 == expected);

    CHECK(phi_witness_labelling(2).label_count() == 11);
    CHECK(phi_witness_labelling(3).label_count() == 16);
    for (unsigned n = 0; n <= 3; ++n) {
        LabelledCommArs w = phi_witness_labelling(n);
        CHECK(w.project() == phi(n).comm);
        CHECK(is_locally_decreasing_comm(w).decreasing);
    }
}

TEST_CASE("structural properties hold on every generated level") {
    for (unsigned n = 0; n <= 3; ++n) {
        PhiSystem p = phi(n);
        CAPTURE(n);
        CHECK(deterministic_oracle(p.comm));
        auto report = verify_phi_properties(n);
        CHECK(report.deterministic);
        CHECK(report.all_reach_sink);
        CHECK(report.join_a);
        CHECK(report.join_b);
        CHECK(report.all());
        CHECK(check_commutation(p.comm).holds);
    }
}

TEST_CASE("one label is not enough at level one") {
    auto res = dc_search(phi(1).comm, 1);
    CHECK(!res.labelling.has_value());
    CHECK(res.exhausted);
}

TEST_CASE("stripping the top label keeps the witness decreasing") {
    for (unsigned n = 0; n <= 3; ++n) {
        LabelledCommArs w = phi_witness_labelling(n);
        CAPTURE(n);
        while (w.label_count() > 1) {
            w = strip_max_label(w);
            CHECK(is_locally_decreasing_comm(w).decreasing);
        }
        CHECK(w.label_count() == 1);
    }
}
