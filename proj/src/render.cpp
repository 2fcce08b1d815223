#include <algorithm>
#include <sstream>

#include "mfid/format.hpp"
#include "mfid/gray_box_json.hpp"

namespace mfid {

using nlohmann::json;

namespace {

json threshold_json(const Threshold& t) {
    if (const auto* d = std::get_if<double>(&t)) return *d;
    if (const auto* s = std::get_if<std::string>(&t)) return *s;
    const auto& tokens = std::get<std::set<std::string>>(t);
    return json(std::vector<std::string>(tokens.begin(), tokens.end()));
}

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::string render_text(const ModelDescriptor& model) {
    std::ostringstream out;
    const auto& box = model.gray_box();
    out << "model: " << model.id() << '\n';
    out << "extends: " << model.extends().value_or("-") << '\n';
    out << "features:";
    for (const auto& id : model.features().sorted_ids()) out << ' ' << id;
    out << '\n';
    out << "cost: compute_rank=" << model.cost().compute_rank
        << " input_count=" << model.cost().input_count << '\n';
    out << "inputs:\n";
    for (const auto& in : box.inputs) {
        out << "  - " << in.label << " [" << in.arity << "] " << in.description << '\n';
    }
    out << "relations:\n";
    for (const auto& rel : box.relations) {
        out << "  - " << rel.text << " {";
        const auto tags = sorted(rel.tags);
        for (std::size_t i = 0; i < tags.size(); ++i) out << (i ? ", " : "") << tags[i];
        out << "}\n";
    }
    out << "outputs:\n";
    for (const auto& o : box.outputs) out << "  - " << o.label << " [" << o.units << "]\n";
    out << "validity frame:";
    if (model.frame().predicates.empty()) out << " (unconditional)";
    out << '\n';
    for (const auto& p : model.frame().predicates) out << "  - " << p.describe() << '\n';
    return out.str();
}

}  // namespace

json gray_box_json(const ModelDescriptor& model) {
    const auto& box = model.gray_box();
    json doc;
    doc["id"] = model.id();
    doc["features"] = model.features().sorted_ids();

    doc["inputs"] = json::array();
    for (const auto& in : box.inputs) {
        doc["inputs"].push_back({{"label", in.label}, {"arity", in.arity},
                                 {"description", in.description}});
    }
    doc["relations"] = json::array();
    for (const auto& rel : box.relations) {
        doc["relations"].push_back({{"text", rel.text}, {"tags", sorted(rel.tags)}});
    }
    doc["outputs"] = json::array();
    for (const auto& o : box.outputs) {
        doc["outputs"].push_back({{"label", o.label}, {"units", o.units}});
    }
    doc["validity_frame"] = json::array();
    for (const auto& p : model.frame().predicates) {
        doc["validity_frame"].push_back({{"parameter", p.parameter},
                                         {"relation", std::string(to_symbol(p.relation))},
                                         {"threshold", threshold_json(p.threshold)}});
    }
    doc["cost"] = {{"input_count", model.cost().input_count},
                   {"compute_rank", model.cost().compute_rank}};
    doc["extends"] = model.extends() ? json(*model.extends()) : json(nullptr);
    return doc;
}

std::string render_gray_box(const ModelDescriptor& model, RenderFormat format) {
    if (format == RenderFormat::Text) return render_text(model);
    return gray_box_json(model).dump(2) + '\n';
}

std::vector<std::string> gray_box_schema_errors(const json& doc) {
    std::vector<std::string> errors;
    const auto need = [&](const char* key, auto pred, const char* what) {
        if (!doc.contains(key) || !pred(doc[key])) {
            errors.push_back(std::string(key) + " must be " + what);
            return false;
        }
        return true;
    };
    const auto is_string = [](const json& j) { return j.is_string(); };
    const auto is_array = [](const json& j) { return j.is_array(); };
    const auto each = [&](const char* key, auto check) {
        for (const auto& item : doc[key]) {
            if (!item.is_object() || !check(item)) {
                errors.push_back(std::string(key) + " has a malformed entry: " + item.dump());
            }
        }
    };

    if (!doc.is_object()) return {"document must be an object"};
    constexpr std::array keys = {"id",     "features",       "inputs", "relations",
                                 "outputs", "validity_frame", "cost",   "extends"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            errors.push_back("unexpected key " + key);
        }
    }

    need("id", is_string, "a string");
    if (need("features", is_array, "an array")) {
        const auto& f = doc["features"];
        if (!std::all_of(f.begin(), f.end(), is_string)) errors.emplace_back("features must be strings");
        else if (!std::is_sorted(f.begin(), f.end())) errors.emplace_back("features must be sorted");
    }
    if (need("inputs", [](const json& j) { return j.is_array() && !j.empty(); },
             "a non-empty array")) {
        each("inputs", [](const json& in) {
            return in.size() == 3 && in.value("label", json()).is_string() &&
                   in.contains("arity") && in["arity"].is_number_integer() && in["arity"] >= 1 &&
                   in.value("description", json()).is_string();
        });
    }
    if (need("relations", is_array, "an array")) {
        each("relations", [](const json& rel) {
            return rel.size() == 2 && rel.value("text", json()).is_string() &&
                   rel.contains("tags") && rel["tags"].is_array() && !rel["tags"].empty() &&
                   std::is_sorted(rel["tags"].begin(), rel["tags"].end());
        });
    }
    if (need("outputs", [](const json& j) { return j.is_array() && !j.empty(); },
             "a non-empty array")) {
        each("outputs", [](const json& o) {
            return o.size() == 2 && o.value("label", json()).is_string() &&
                   o.value("units", json()).is_string();
        });
    }
    if (need("validity_frame", is_array, "an array")) {
        each("validity_frame", [](const json& p) {
            static const std::array rels = {"<", "<=", ">", ">=", "=", "in"};
            return p.size() == 3 && p.value("parameter", json()).is_string() &&
                   p.contains("relation") && p["relation"].is_string() &&
                   std::find(rels.begin(), rels.end(), p["relation"].get<std::string>()) !=
                       rels.end() &&
                   p.contains("threshold") &&
                   (p["threshold"].is_number() || p["threshold"].is_string() ||
                    p["threshold"].is_array());
        });
    }
    need("cost", [](const json& c) {
        return c.is_object() && c.size() == 2 && c.contains("input_count") &&
               c["input_count"].is_number_integer() && c["input_count"] >= 1 &&
               c.contains("compute_rank") && c["compute_rank"].is_number_integer() &&
               c["compute_rank"] >= 1 && c["compute_rank"] <= 3;
    }, "{input_count >= 1, compute_rank in 1..3}");
    need("extends", [](const json& e) { return e.is_string() || e.is_null(); },
         "a string or null");
    return errors;
}

}  // namespace mfid
