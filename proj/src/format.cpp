#include "spectral_hardy/format.hpp"

#include <cmath>
#include <cstdio>

namespace spectral_hardy::format {

namespace {

// snprintf honours LC_NUMERIC; the library never calls setlocale, so the C
// locale is in effect unless the host program changes it.  Normalise the
// decimal separator anyway.
std::string printf_c_locale(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    std::string out(buf);
    for (char& c : out)
        if (c == ',') c = '.';
    return out;
}

}  // namespace

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return printf_c_locale("%.17g", v);
}

std::string scientific(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return printf_c_locale("%.16e", v);
}

std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

void JsonObject::key(std::string_view k) {
    if (!body_.empty()) body_ += ',';
    body_ += json_string(k);
    body_ += ':';
}

JsonObject& JsonObject::number(std::string_view k, double v) {
    key(k);
    body_ += json_number(v);
    return *this;
}

JsonObject& JsonObject::integer(std::string_view k, long long v) {
    key(k);
    body_ += std::to_string(v);
    return *this;
}

JsonObject& JsonObject::boolean(std::string_view k, bool v) {
    key(k);
    body_ += v ? "true" : "false";
    return *this;
}

JsonObject& JsonObject::string(std::string_view k, std::string_view v) {
    key(k);
    body_ += json_string(v);
    return *this;
}

JsonObject& JsonObject::null(std::string_view k) {
    key(k);
    body_ += "null";
    return *this;
}

JsonObject& JsonObject::raw(std::string_view k, std::string_view json) {
    key(k);
    body_ += json;
    return *this;
}

}  // namespace spectral_hardy::format
