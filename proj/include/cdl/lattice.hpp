#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "cdl/graph.hpp"
#include "cdl/levels.hpp"
#include "cdl/scm.hpp"

namespace cdl {

/// Thrown when a level is built with a payload that does not fit its tag.
class LevelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class LatticeError : public std::runtime_error {
public:
    enum class Reason { TemporalMismatch, PayloadConflict };
    LatticeError(Reason reason, const std::string& message)
        : std::runtime_error(message), reason_(reason) {}
    [[nodiscard]] Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

struct PlausiblePayload {
    IndependenceSet independencies;
    std::optional<Pdag> pdag;
    friend bool operator==(const PlausiblePayload&, const PlausiblePayload&) = default;
};

/// Structural tag with an optional payload: independence statements (and/or a
/// PDAG) for Plausible, a DAG for Causal. Unknown never carries one.
class StructuralLevel {
public:
    using Payload = std::variant<std::monostate, PlausiblePayload, Dag>;

    StructuralLevel() = default;
    explicit StructuralLevel(StructuralTag tag) : tag_(tag) {}

    static StructuralLevel unknown() { return StructuralLevel(StructuralTag::Unknown); }
    /// Throws LevelError if the statement set is empty and no PDAG is given.
    static StructuralLevel plausible(IndependenceSet independencies, std::optional<Pdag> pdag = {});
    static StructuralLevel causal(Dag graph);

    [[nodiscard]] StructuralTag tag() const noexcept { return tag_; }
    [[nodiscard]] const Payload& payload() const noexcept { return payload_; }
    [[nodiscard]] bool has_payload() const noexcept { return payload_.index() != 0; }
    [[nodiscard]] const Dag* dag() const noexcept { return std::get_if<Dag>(&payload_); }

    friend bool operator==(const StructuralLevel&, const StructuralLevel&) = default;

private:
    StructuralTag tag_ = StructuralTag::Unknown;
    Payload payload_;
};

struct NoiseForm {
    bool additive = true;
    std::optional<NoiseSpec::Family> family;
    friend bool operator==(const NoiseForm&, const NoiseForm&) = default;
};

struct FunctionClass {
    enum class Kind { Linear, Polynomial };
    Kind kind = Kind::Linear;
    int degree = 1;
    /// Throws LevelError for a polynomial degree below 1.
    static FunctionClass linear() { return {Kind::Linear, 1}; }
    static FunctionClass polynomial(int degree);
    friend bool operator==(const FunctionClass&, const FunctionClass&) = default;
};

/// Parametric tag with an optional payload: a noise form for NoiseModel, a
/// function class for Parametric, a complete equation set for FullyKnown.
class ParametricLevel {
public:
    using Payload = std::variant<std::monostate, NoiseForm, FunctionClass, std::shared_ptr<const Scm>>;

    ParametricLevel() = default;
    explicit ParametricLevel(ParametricTag tag) : tag_(tag) {}

    static ParametricLevel nonparametric() { return ParametricLevel(ParametricTag::NonParametric); }
    static ParametricLevel noise_model(NoiseForm form);
    static ParametricLevel parametric(FunctionClass cls);
    /// Throws LevelError unless every endogenous equation has a generative form.
    static ParametricLevel fully_known(std::shared_ptr<const Scm> equations);

    [[nodiscard]] ParametricTag tag() const noexcept { return tag_; }
    [[nodiscard]] const Payload& payload() const noexcept { return payload_; }
    [[nodiscard]] bool has_payload() const noexcept { return payload_.index() != 0; }
    [[nodiscard]] const Scm* equations() const noexcept;

    /// Scm payloads compare by value.
    friend bool operator==(const ParametricLevel& a, const ParametricLevel& b);

private:
    ParametricTag tag_ = ParametricTag::NonParametric;
    Payload payload_;
};

/// One point of the (structural, parametric, temporal) grid.
class KnowledgeState {
public:
    KnowledgeState() = default;
    /// Throws LevelError when a FullyKnown equation set sits on a Causal DAG
    /// with a different parent structure.
    KnowledgeState(StructuralLevel s, ParametricLevel p, TemporalFlag t);
    KnowledgeState(StructuralTag s, ParametricTag p, TemporalFlag t)
        : structural_(s), parametric_(p), temporal_(t) {}

    [[nodiscard]] const StructuralLevel& structural() const noexcept { return structural_; }
    [[nodiscard]] const ParametricLevel& parametric() const noexcept { return parametric_; }
    [[nodiscard]] TemporalFlag temporal() const noexcept { return temporal_; }

    /// Same tags, payloads dropped.
    [[nodiscard]] KnowledgeState tags_only() const {
        return {structural_.tag(), parametric_.tag(), temporal_};
    }

    friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

private:
    StructuralLevel structural_;
    ParametricLevel parametric_;
    TemporalFlag temporal_ = TemporalFlag::Static;
};

struct Transition {
    enum class Kind { None, Structural, Parametric, Both };
    KnowledgeState from;
    KnowledgeState to;
    Kind kind = Kind::None;
    /// Some tag is strictly lower after the transition.
    bool relaxing = false;
};

[[nodiscard]] std::string_view to_string(Transition::Kind kind);

[[nodiscard]] bool leq_structural(const StructuralLevel& a, const StructuralLevel& b) noexcept;
[[nodiscard]] bool leq_parametric(const ParametricLevel& a, const ParametricLevel& b) noexcept;

/// Possessed knowledge is at least the required knowledge on both scales and
/// the temporal flags match exactly.
[[nodiscard]] bool satisfies(const KnowledgeState& possessed, const KnowledgeState& required) noexcept;

/// Componentwise maximum. The higher tag's payload is kept; at equal tags a
/// present payload wins over an absent one and two different present payloads
/// throw LatticeError(PayloadConflict). Mismatched temporal flags throw
/// LatticeError(TemporalMismatch).
[[nodiscard]] KnowledgeState join_states(const KnowledgeState& a, const KnowledgeState& b);

[[nodiscard]] Transition classify_transition(const KnowledgeState& from, const KnowledgeState& to);

/// "structural:parametric:temporal", e.g. "causal:noise_model:static".
[[nodiscard]] std::string to_string(const KnowledgeState& s);
/// Parses the to_string form into a tag-only state. Throws LevelParseError.
[[nodiscard]] KnowledgeState parse_state(std::string_view text);

}  // namespace cdl
