#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdtw/io.hpp"

namespace kdtw::cli {

/// Minimal ordered JSON builder; numbers use 17 significant digits.
class JsonValue {
public:
    static JsonValue raw(std::string text) { return JsonValue(std::move(text)); }
    static JsonValue number(double v) { return raw(std::isfinite(v) ? format_double(v) : "null"); }
    static JsonValue integer(std::size_t v) { return raw(std::to_string(v)); }
    static JsonValue boolean(bool v) { return raw(v ? "true" : "false"); }
    static JsonValue string(std::string_view s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return raw(out + "\"");
    }

    [[nodiscard]] const std::string& text() const { return text_; }

private:
    explicit JsonValue(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

class JsonObject {
public:
    JsonObject& add(std::string key, JsonValue value) {
        fields_.emplace_back(std::move(key), value.text());
        return *this;
    }
    JsonObject& add(std::string key, const JsonObject& value) { return add(std::move(key), value.value()); }

    [[nodiscard]] JsonValue value() const {
        std::string out = "{";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            if (i) out += ',';
            out += JsonValue::string(fields_[i].first).text() + ":" + fields_[i].second;
        }
        return JsonValue::raw(out + "}");
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

template <typename T, typename F>
JsonValue json_array(const std::vector<T>& items, F&& to_value) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += to_value(items[i]).text();
    }
    return JsonValue::raw(out + "]");
}

}  // namespace kdtw::cli
