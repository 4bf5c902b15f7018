#include "doctest.h"

#include <vector>

#include "cdl/graph_io.hpp"
#include "cdl/lattice.hpp"

using namespace cdl;

namespace {

std::vector<KnowledgeState> all_tag_states() {
    std::vector<KnowledgeState> out;
    for (auto s : kStructuralTags)
        for (auto p : kParametricTags)
            for (auto t : kTemporalFlags) out.emplace_back(s, p, t);
    return out;
}

KnowledgeState st(const char* text) { return parse_state(text); }

}  // namespace

TEST_CASE("tag order on each scale") {
    using S = StructuralLevel;
    using P = ParametricLevel;
    CHECK(leq_structural(S::unknown(), S(StructuralTag::Causal)));
    CHECK(leq_structural(S(StructuralTag::Causal), S(StructuralTag::Causal)));
    CHECK_FALSE(leq_structural(S(StructuralTag::Causal), S(StructuralTag::Plausible)));
    CHECK(leq_parametric(P(ParametricTag::NoiseModel), P(ParametricTag::Parametric)));
    CHECK(leq_parametric(P::nonparametric(), P::nonparametric()));
    CHECK_FALSE(leq_parametric(P(ParametricTag::FullyKnown), P(ParametricTag::NoiseModel)));
}

TEST_CASE("payloads do not affect the order") {
    const Dag g = parse_dag("A -> B");
    CHECK(leq_structural(StructuralLevel::causal(g), StructuralLevel(StructuralTag::Causal)));
    CHECK(leq_structural(StructuralLevel(StructuralTag::Causal), StructuralLevel::causal(g)));
}

TEST_CASE("satisfies allows relaxation only") {
    CHECK(satisfies(st("causal:noise_model:static"), st("causal:nonparametric:static")));
    CHECK_FALSE(satisfies(st("plausible:nonparametric:static"), st("causal:nonparametric:static")));
    CHECK_FALSE(satisfies(st("causal:fully_known:temporal"), st("causal:nonparametric:static")));
    for (const auto& x : all_tag_states()) CHECK(satisfies(x, x));
}

TEST_CASE("join takes the componentwise maximum") {
    const auto j = join_states(st("unknown:noise_model:static"), st("causal:nonparametric:static"));
    CHECK(j == st("causal:noise_model:static"));
    const auto x = st("plausible:parametric:temporal");
    CHECK(join_states(x, x) == x);
}

TEST_CASE("join rejects conflicting payloads and mixed time") {
    const auto g1 = StructuralLevel::causal(parse_dag("A -> B"));
    const auto g2 = StructuralLevel::causal(parse_dag("B -> A"));
    const KnowledgeState a(g1, ParametricLevel::nonparametric(), TemporalFlag::Static);
    const KnowledgeState b(g2, ParametricLevel::nonparametric(), TemporalFlag::Static);
    try {
        (void)join_states(a, b);
        FAIL("expected a payload conflict");
    } catch (const LatticeError& e) {
        CHECK(e.reason() == LatticeError::Reason::PayloadConflict);
    }
    try {
        (void)join_states(st("causal:parametric:static"), st("causal:parametric:temporal"));
        FAIL("expected a temporal mismatch");
    } catch (const LatticeError& e) {
        CHECK(e.reason() == LatticeError::Reason::TemporalMismatch);
    }
}

TEST_CASE("join keeps a present payload over an absent one and the higher tag's payload") {
    const auto g = StructuralLevel::causal(parse_dag("A -> B"));
    const KnowledgeState with(g, ParametricLevel::nonparametric(), TemporalFlag::Static);
    const auto bare = st("causal:nonparametric:static");
    CHECK(join_states(with, bare) == with);
    CHECK(join_states(bare, with) == with);
    CHECK(join_states(with, st("plausible:noise_model:static")).structural() == g);

    IndependenceSet ind;
    ind.add("A", "B", {}, true);
    const KnowledgeState plaus(StructuralLevel::plausible(ind), ParametricLevel::nonparametric(),
                               TemporalFlag::Static);
    CHECK(join_states(plaus, with).structural() == g);
}

TEST_CASE("transition classification") {
    auto t = classify_transition(st("unknown:noise_model:static"), st("causal:noise_model:static"));
    CHECK(t.kind == Transition::Kind::Structural);
    CHECK_FALSE(t.relaxing);
    CHECK(classify_transition(st("causal:nonparametric:static"), st("causal:nonparametric:static")).kind ==
          Transition::Kind::None);
    CHECK(classify_transition(st("unknown:nonparametric:static"), st("unknown:fully_known:static")).kind ==
          Transition::Kind::Parametric);
    t = classify_transition(st("causal:parametric:static"), st("plausible:fully_known:static"));
    CHECK(t.kind == Transition::Kind::Both);
    CHECK(t.relaxing);
}

TEST_CASE("state strings") {
    for (const auto& x : all_tag_states()) CHECK(parse_state(to_string(x)) == x);
    CHECK(to_string(st("causal:noise_model:static")) == "causal:noise_model:static");
    CHECK_THROWS_AS((void)parse_state("causal:noise_model"), LevelParseError);
    CHECK_THROWS_AS((void)parse_state("causal:noise-model:static"), LevelParseError);
    CHECK_THROWS_AS((void)parse_state("Causal:noise_model:static"), LevelParseError);
    CHECK_THROWS_AS((void)parse_state("causal:noise_model:static:x"), LevelParseError);
}

TEST_CASE("level payload invariants") {
    CHECK_THROWS_AS((void)StructuralLevel::plausible(IndependenceSet{}), LevelError);
    CHECK_NOTHROW((void)StructuralLevel::plausible(IndependenceSet{}, Pdag({"A", "B"}, {}, {{"A", "B"}})));
    CHECK_THROWS_AS((void)FunctionClass::polynomial(0), LevelError);
    CHECK_THROWS_AS((void)ParametricLevel::fully_known(nullptr), LevelError);

    const Dag g = parse_dag("X -> Y");
    auto scm = std::make_shared<const Scm>(parse_scm("graph:\n X -> Y\nequations:\n Y := 2*X\nnoise:\n U_X ~ Normal(0, 1)\n"));
    const auto fk = ParametricLevel::fully_known(scm);
    CHECK_NOTHROW(KnowledgeState(StructuralLevel::causal(g), fk, TemporalFlag::Static));
    CHECK_THROWS_AS(KnowledgeState(StructuralLevel::causal(parse_dag("Y -> X")), fk, TemporalFlag::Static),
                    LevelError);

    StructuralEquation descriptive{"Y", {"X"}, ParametricTag::Parametric, std::nullopt};
    auto partial = std::make_shared<const Scm>(g, std::map<Variable, StructuralEquation>{{"Y", descriptive}},
                                               std::map<Variable, NoiseSpec>{{"X", NoiseSpec::normal(0, 1)}});
    CHECK_THROWS_AS((void)ParametricLevel::fully_known(partial), LevelError);
}

TEST_CASE("equation-set payloads compare by value") {
    const char* text = "graph:\n X -> Y\nequations:\n Y := 2*X\nnoise:\n U_X ~ Normal(0, 1)\n";
    const auto a = ParametricLevel::fully_known(std::make_shared<const Scm>(parse_scm(text)));
    const auto b = ParametricLevel::fully_known(std::make_shared<const Scm>(parse_scm(text)));
    CHECK(a == b);
    const KnowledgeState x(StructuralLevel(StructuralTag::Causal), a, TemporalFlag::Static);
    const KnowledgeState y(StructuralLevel(StructuralTag::Causal), b, TemporalFlag::Static);
    CHECK_NOTHROW((void)join_states(x, y));
}
