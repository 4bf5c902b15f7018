#include "cdl/lattice.hpp"

#include <algorithm>

namespace cdl {

StructuralLevel StructuralLevel::plausible(IndependenceSet independencies, std::optional<Pdag> pdag) {
    if (independencies.empty() && !pdag) {
        throw LevelError("a plausible payload needs independence statements or a PDAG");
    }
    StructuralLevel s(StructuralTag::Plausible);
    s.payload_ = PlausiblePayload{std::move(independencies), std::move(pdag)};
    return s;
}

StructuralLevel StructuralLevel::causal(Dag graph) {
    StructuralLevel s(StructuralTag::Causal);
    s.payload_ = std::move(graph);
    return s;
}

FunctionClass FunctionClass::polynomial(int degree) {
    if (degree < 1) throw LevelError("polynomial degree must be at least 1");
    return {Kind::Polynomial, degree};
}

ParametricLevel ParametricLevel::noise_model(NoiseForm form) {
    ParametricLevel p(ParametricTag::NoiseModel);
    p.payload_ = form;
    return p;
}

ParametricLevel ParametricLevel::parametric(FunctionClass cls) {
    ParametricLevel p(ParametricTag::Parametric);
    p.payload_ = cls;
    return p;
}

ParametricLevel ParametricLevel::fully_known(std::shared_ptr<const Scm> equations) {
    if (!equations) throw LevelError("a fully known payload needs an equation set");
    if (!equations->is_complete()) {
        throw LevelError("a fully known equation set must give every endogenous variable a form");
    }
    ParametricLevel p(ParametricTag::FullyKnown);
    p.payload_ = std::move(equations);
    return p;
}

const Scm* ParametricLevel::equations() const noexcept {
    const auto* p = std::get_if<std::shared_ptr<const Scm>>(&payload_);
    return p ? p->get() : nullptr;
}

bool operator==(const ParametricLevel& a, const ParametricLevel& b) {
    if (a.tag_ != b.tag_ || a.payload_.index() != b.payload_.index()) return false;
    if (const Scm* sa = a.equations()) return *sa == *b.equations();
    return a.payload_ == b.payload_;
}

KnowledgeState::KnowledgeState(StructuralLevel s, ParametricLevel p, TemporalFlag t)
    : structural_(std::move(s)), parametric_(std::move(p)), temporal_(t) {
    const Dag* dag = structural_.dag();
    const Scm* scm = parametric_.equations();
    if (dag && scm && !(scm->graph() == *dag)) {
        throw LevelError("equation set's parent structure differs from the causal DAG");
    }
}

std::string_view to_string(Transition::Kind kind) {
    switch (kind) {
        case Transition::Kind::None: return "none";
        case Transition::Kind::Structural: return "structural";
        case Transition::Kind::Parametric: return "parametric";
        case Transition::Kind::Both: return "both";
    }
    return "none";
}

bool leq_structural(const StructuralLevel& a, const StructuralLevel& b) noexcept {
    return a.tag() <= b.tag();
}

bool leq_parametric(const ParametricLevel& a, const ParametricLevel& b) noexcept {
    return a.tag() <= b.tag();
}

bool satisfies(const KnowledgeState& possessed, const KnowledgeState& required) noexcept {
    return leq_structural(required.structural(), possessed.structural()) &&
           leq_parametric(required.parametric(), possessed.parametric()) &&
           possessed.temporal() == required.temporal();
}

namespace {

template <class Level>
Level join_level(const Level& a, const Level& b, const char* axis) {
    if (a.tag() != b.tag()) return a.tag() > b.tag() ? a : b;
    if (!a.has_payload()) return b;
    if (!b.has_payload() || a == b) return a;
    throw LatticeError(LatticeError::Reason::PayloadConflict,
                       std::string("conflicting ") + axis + " payloads at equal level");
}

}  // namespace

KnowledgeState join_states(const KnowledgeState& a, const KnowledgeState& b) {
    if (a.temporal() != b.temporal()) {
        throw LatticeError(LatticeError::Reason::TemporalMismatch,
                           "cannot join a static state with a temporal state");
    }
    return KnowledgeState(join_level(a.structural(), b.structural(), "structural"),
                          join_level(a.parametric(), b.parametric(), "parametric"), a.temporal());
}

Transition classify_transition(const KnowledgeState& from, const KnowledgeState& to) {
    const auto fs = from.structural().tag();
    const auto ts = to.structural().tag();
    const auto fp = from.parametric().tag();
    const auto tp = to.parametric().tag();
    Transition t{from, to, Transition::Kind::None, ts < fs || tp < fp};
    if (fs != ts && fp != tp) t.kind = Transition::Kind::Both;
    else if (fs != ts) t.kind = Transition::Kind::Structural;
    else if (fp != tp) t.kind = Transition::Kind::Parametric;
    return t;
}

std::string to_string(const KnowledgeState& s) {
    return std::string(to_string(s.structural().tag())) + ":" +
           std::string(to_string(s.parametric().tag())) + ":" + std::string(to_string(s.temporal()));
}

KnowledgeState parse_state(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
        throw LevelParseError("expected structural:parametric:temporal, got '" + std::string(text) + "'");
    }
    return {parse_structural_tag(text.substr(0, a)), parse_parametric_tag(text.substr(a + 1, b - a - 1)),
            parse_temporal_flag(text.substr(b + 1))};
}

}  // namespace cdl
