#pragma once

// JSON wire formats: GroupPoint <-> [x,y,t]; GridSpec/GridFunction <->
// {box, n, values} with samples base64-encoded as little-endian 64-bit
// floats.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/grid.hpp"
#include "carnot/group.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

inline std::string base64_encode(const std::vector<double>& values) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &values[i], 8);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = bytes[i] << 16;
        int have = 1;
        if (i + 1 < bytes.size()) {
            chunk |= bytes[i + 1] << 8;
            have = 2;
        }
        if (i + 2 < bytes.size()) {
            chunk |= bytes[i + 2];
            have = 3;
        }
        out.push_back(alphabet[(chunk >> 18) & 63]);
        out.push_back(alphabet[(chunk >> 12) & 63]);
        out.push_back(have >= 2 ? alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(have >= 3 ? alphabet[chunk & 63] : '=');
    }
    return out;
}

inline std::vector<double> base64_decode_doubles(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw std::invalid_argument("base64: unexpected character");
    };
    std::vector<unsigned char> bytes;
    bytes.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i + 3 < text.size(); i += 4) {
        const int a = value_of(text[i]);
        const int b = value_of(text[i + 1]);
        const int c = value_of(text[i + 2]);
        const int d = value_of(text[i + 3]);
        if (a < 0 || b < 0) throw std::invalid_argument("base64: malformed quartet");
        bytes.push_back(static_cast<unsigned char>((a << 2) | (b >> 4)));
        if (c >= 0) bytes.push_back(static_cast<unsigned char>(((b & 15) << 4) | (c >> 2)));
        if (c >= 0 && d >= 0) bytes.push_back(static_cast<unsigned char>(((c & 3) << 6) | d));
    }
    if (bytes.size() % 8 != 0) throw std::invalid_argument("base64: byte count not a multiple of 8");
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
        std::memcpy(&out[i], &bits, 8);
    }
    return out;
}

inline Json to_json(const GroupPoint& p) { return Json::array({p.x, p.y, p.t}); }

inline GroupPoint group_point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("GroupPoint: expected [x, y, t]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Json to_json(const GridFunction& g) {
    Json j;
    j["box"] = Json::array({Json::array({g.spec.lo[0], g.spec.hi[0]}),
                            Json::array({g.spec.lo[1], g.spec.hi[1]}),
                            Json::array({g.spec.lo[2], g.spec.hi[2]})});
    j["n"] = Json::array({g.spec.n[0], g.spec.n[1], g.spec.n[2]});
    j["values"] = base64_encode(g.values);
    return j;
}

inline GridFunction grid_function_from_json(const Json& j) {
    GridSpec spec;
    const auto& box = j.at("box");
    for (int a = 0; a < 3; ++a) {
        spec.lo[a] = box.at(a).at(0).get<double>();
        spec.hi[a] = box.at(a).at(1).get<double>();
    }
    const auto& n = j.at("n");
    for (int a = 0; a < 3; ++a) spec.n[a] = n.at(a).get<int>();
    spec.validate();
    GridFunction g(spec);
    g.values = base64_decode_doubles(j.at("values").get<std::string>());
    g.check_consistent();
    return g;
}

}  // namespace carnot
