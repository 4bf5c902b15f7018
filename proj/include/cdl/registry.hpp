#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cdl/lattice.hpp"

namespace cdl {

/// A method's fingerprint: the knowledge it needs and the knowledge it yields.
struct MethodCard {
    std::string id;
    std::string name;
    std::string citation_key;
    KnowledgeState a_priori;
    KnowledgeState a_posteriori;
    std::set<std::string> assumption_tags;
    std::string notes;

    friend bool operator==(const MethodCard&, const MethodCard&) = default;
};

struct Catalog {
    std::vector<MethodCard> cards;
    int version = 1;

    /// nullptr when no card has this id.
    [[nodiscard]] const MethodCard* find(std::string_view id) const;

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

/// Invalid catalog content. card_id is empty when the problem is not tied to a card.
class CatalogError : public std::runtime_error {
public:
    CatalogError(std::string card_id, std::string field, const std::string& message);
    [[nodiscard]] const std::string& card_id() const noexcept { return card_id_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string card_id_;
    std::string field_;
};

/// Parses the JSON array format. All-or-nothing: the first invalid card throws
/// CatalogError naming the card and the field.
[[nodiscard]] Catalog parse_catalog(std::string_view json_text);
/// Throws std::runtime_error when the file cannot be read.
[[nodiscard]] Catalog load_catalog(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const MethodCard& card);
[[nodiscard]] std::string dump_catalog(const Catalog& c);
void save_catalog(const Catalog& c, const std::filesystem::path& path);

/// The built-in catalog of published methods and their fingerprints.
[[nodiscard]] std::string_view seed_catalog_json();
[[nodiscard]] Catalog seed_catalog();

/// A state pattern where each axis may be left open ("causal:*:temporal").
struct StateBound {
    std::optional<StructuralTag> structural;
    std::optional<ParametricTag> parametric;
    std::optional<TemporalFlag> temporal;
};

/// Throws LevelParseError on malformed text.
[[nodiscard]] StateBound parse_bound(std::string_view text);

struct CatalogFilter {
    std::optional<TemporalFlag> temporal;
    /// a_posteriori must be at least this on every bound axis.
    std::optional<StateBound> min_a_posteriori;
    /// a_priori must be at most this on every bound axis.
    std::optional<StateBound> max_a_priori;
    std::optional<std::string> tag;
};

/// Cards matching every set filter field, ordered by id.
[[nodiscard]] std::vector<MethodCard> query_catalog(const Catalog& c, const CatalogFilter& filter);

}  // namespace cdl
