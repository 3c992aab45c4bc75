#pragma once

// Locale-independent number formatting and a small ordered JSON writer.

#include <string>
#include <string_view>

namespace spectral_hardy::format {

/// %.17g in the C locale; non-finite values become "null".
std::string json_number(double v);
/// Scientific notation with 17 significant digits; non-finite as "nan"/"inf".
std::string scientific(double v);
/// JSON string literal with escapes.
std::string json_string(std::string_view s);

/// Single-line JSON object whose fields keep insertion order.
class JsonObject {
public:
    JsonObject& number(std::string_view key, double v);
    JsonObject& integer(std::string_view key, long long v);
    JsonObject& boolean(std::string_view key, bool v);
    JsonObject& string(std::string_view key, std::string_view v);
    JsonObject& null(std::string_view key);
    /// Inserts pre-rendered JSON.
    JsonObject& raw(std::string_view key, std::string_view json);
    std::string str() const { return "{" + body_ + "}"; }

private:
    void key(std::string_view k);
    std::string body_;
};

}  // namespace spectral_hardy::format
