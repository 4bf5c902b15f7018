#include "cdl/registry.hpp"

#include <algorithm>
#include <fstream>

#include "cdl/graph_io.hpp"

namespace cdl {

using nlohmann::json;

const MethodCard* Catalog::find(std::string_view id) const {
    auto it = std::find_if(cards.begin(), cards.end(), [&](const MethodCard& c) { return c.id == id; });
    return it == cards.end() ? nullptr : &*it;
}

CatalogError::CatalogError(std::string card_id, std::string field, const std::string& message)
    : std::runtime_error(card_id.empty() ? message
                                         : "card '" + card_id + "', field '" + field + "': " + message),
      card_id_(std::move(card_id)),
      field_(std::move(field)) {}

namespace {

const json& require(const json& obj, const std::string& id, const char* field, json::value_t type) {
    auto it = obj.find(field);
    if (it == obj.end()) throw CatalogError(id, field, "missing");
    if (it->type() != type && !(type == json::value_t::string && it->is_string())) {
        throw CatalogError(id, field, "has the wrong type");
    }
    return *it;
}

KnowledgeState parse_card_state(const json& obj, const std::string& id, const std::string& field) {
    if (!obj.is_object()) throw CatalogError(id, field, "must be an object");
    auto text = [&](const char* axis) {
        auto it = obj.find(axis);
        if (it == obj.end() || !it->is_string()) {
            throw CatalogError(id, field + "." + axis, "missing or not a string");
        }
        return it->get<std::string>();
    };
    try {
        const auto s = parse_structural_tag(text("structural"));
        try {
            const auto p = parse_parametric_tag(text("parametric"));
            try {
                return {s, p, parse_temporal_flag(text("temporal"))};
            } catch (const LevelParseError& e) {
                throw CatalogError(id, field + ".temporal", e.what());
            }
        } catch (const LevelParseError& e) {
            throw CatalogError(id, field + ".parametric", e.what());
        }
    } catch (const LevelParseError& e) {
        throw CatalogError(id, field + ".structural", e.what());
    }
}

json state_json(const KnowledgeState& s) {
    return {{"structural", to_string(s.structural().tag())},
            {"parametric", to_string(s.parametric().tag())},
            {"temporal", to_string(s.temporal())}};
}

}  // namespace

Catalog parse_catalog(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CatalogError("", "", std::string("catalog is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw CatalogError("", "", "catalog must be a JSON array of cards");

    Catalog out;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const json& obj = doc[k];
        const std::string where = "#" + std::to_string(k);
        if (!obj.is_object()) throw CatalogError(where, "", "card must be an object");
        auto id_it = obj.find("id");
        if (id_it == obj.end() || !id_it->is_string() || id_it->get<std::string>().empty()) {
            throw CatalogError(where, "id", "missing or empty");
        }
        MethodCard card;
        card.id = id_it->get<std::string>();
        const auto& id = card.id;
        if (!seen.insert(id).second) throw CatalogError(id, "id", "duplicate id");
        card.name = require(obj, id, "name", json::value_t::string).get<std::string>();
        card.citation_key = require(obj, id, "citation_key", json::value_t::string).get<std::string>();
        card.notes = require(obj, id, "notes", json::value_t::string).get<std::string>();
        card.a_priori = parse_card_state(require(obj, id, "a_priori", json::value_t::object), id, "a_priori");
        card.a_posteriori =
            parse_card_state(require(obj, id, "a_posteriori", json::value_t::object), id, "a_posteriori");
        const auto& tags = require(obj, id, "assumption_tags", json::value_t::array);
        for (const auto& t : tags) {
            if (!t.is_string()) throw CatalogError(id, "assumption_tags", "entries must be strings");
            card.assumption_tags.insert(t.get<std::string>());
        }
        if (card.a_priori.temporal() != card.a_posteriori.temporal()) {
            throw CatalogError(id, "a_posteriori.temporal", "differs from a_priori.temporal");
        }
        out.cards.push_back(std::move(card));
    }
    return out;
}

Catalog load_catalog(const std::filesystem::path& path) { return parse_catalog(read_text_file(path)); }

json to_json(const MethodCard& card) {
    return {{"id", card.id},
            {"name", card.name},
            {"citation_key", card.citation_key},
            {"a_priori", state_json(card.a_priori)},
            {"a_posteriori", state_json(card.a_posteriori)},
            {"assumption_tags", card.assumption_tags},
            {"notes", card.notes}};
}

std::string dump_catalog(const Catalog& c) {
    json arr = json::array();
    for (const auto& card : c.cards) arr.push_back(to_json(card));
    return arr.dump(2) + '\n';
}

void save_catalog(const Catalog& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << dump_catalog(c);
}

Catalog seed_catalog() { return parse_catalog(seed_catalog_json()); }

StateBound parse_bound(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
        throw LevelParseError("expected structural:parametric:temporal with '*' wildcards, got '" +
                              std::string(text) + "'");
    }
    const auto s = text.substr(0, a);
    const auto p = text.substr(a + 1, b - a - 1);
    const auto t = text.substr(b + 1);
    StateBound out;
    if (s != "*") out.structural = parse_structural_tag(s);
    if (p != "*") out.parametric = parse_parametric_tag(p);
    if (t != "*") out.temporal = parse_temporal_flag(t);
    return out;
}

namespace {

bool at_least(const KnowledgeState& s, const StateBound& b) {
    return (!b.structural || s.structural().tag() >= *b.structural) &&
           (!b.parametric || s.parametric().tag() >= *b.parametric) &&
           (!b.temporal || s.temporal() == *b.temporal);
}

bool at_most(const KnowledgeState& s, const StateBound& b) {
    return (!b.structural || s.structural().tag() <= *b.structural) &&
           (!b.parametric || s.parametric().tag() <= *b.parametric) &&
           (!b.temporal || s.temporal() == *b.temporal);
}

}  // namespace

std::vector<MethodCard> query_catalog(const Catalog& c, const CatalogFilter& filter) {
    std::vector<MethodCard> out;
    for (const auto& card : c.cards) {
        if (filter.temporal && card.a_priori.temporal() != *filter.temporal) continue;
        if (filter.min_a_posteriori && !at_least(card.a_posteriori, *filter.min_a_posteriori)) continue;
        if (filter.max_a_priori && !at_most(card.a_priori, *filter.max_a_priori)) continue;
        if (filter.tag && !card.assumption_tags.count(*filter.tag)) continue;
        out.push_back(card);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

}  // namespace cdl
