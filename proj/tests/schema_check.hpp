#pragma once

// Minimal JSON-schema checker covering the subset the report schema uses:
// type (string or array of strings), enum, required, properties,
// additionalProperties (boolean), items (single schema). Returns an empty
// string when the instance validates, else the first problem found.

#include <string>

#include "json.hpp"

namespace schema_check {

inline bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    return false;
}

inline std::string validate(const nlohmann::json& instance, const nlohmann::json& schema,
                            const std::string& path = "$") {
    if (schema.contains("enum")) {
        for (const auto& option : schema.at("enum"))
            if (instance == option) return {};
        return path + ": value not in enum";
    }
    if (schema.contains("type")) {
        const auto& t = schema.at("type");
        bool ok = false;
        if (t.is_string())
            ok = type_matches(instance, t.get<std::string>());
        else
            for (const auto& option : t)
                if (type_matches(instance, option.get<std::string>())) ok = true;
        if (!ok) return path + ": wrong type";
    }
    if (instance.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema.at("required"))
                if (!instance.contains(key.get<std::string>()))
                    return path + ": missing required key " + key.get<std::string>();
        }
        const auto props = schema.value("properties", nlohmann::json::object());
        const bool allow_extra = schema.value("additionalProperties", true);
        for (const auto& [key, value] : instance.items()) {
            if (props.contains(key)) {
                const std::string err = validate(value, props.at(key), path + "." + key);
                if (!err.empty()) return err;
            } else if (!allow_extra) {
                return path + ": unexpected key " + key;
            }
        }
    }
    if (instance.is_array() && schema.contains("items")) {
        std::size_t idx = 0;
        for (const auto& element : instance) {
            const std::string err =
                validate(element, schema.at("items"), path + "[" + std::to_string(idx) + "]");
            if (!err.empty()) return err;
            ++idx;
        }
    }
    return {};
}

}  // namespace schema_check
