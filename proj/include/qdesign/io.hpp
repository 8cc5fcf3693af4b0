#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qdesign/largesets.hpp"

namespace qdesign {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json int_to_json(const Int& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() &&
        x <= std::numeric_limits<std::int64_t>::max())
        return x.convert_to<std::int64_t>();
    return x.str(); // too wide for a JSON number: decimal string
}

inline Int int_from_json(const ordered_json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw FormatError(what + ": '" + j.get<std::string>() + "' is not an integer");
        }
    }
    throw FormatError(what + ": expected an integer or a decimal string");
}

inline unsigned uint_from_json(const ordered_json& j, const std::string& what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw FormatError(what + ": expected a nonnegative integer");
    return j.get<unsigned>();
}

inline const ordered_json& field_of(const ordered_json& j, const std::string& key,
                                    const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(where + ": missing field '" + key + "'");
    return *it;
}

} // namespace detail

// ---------------------------------------------------------------------------
// qdesign/1
// ---------------------------------------------------------------------------

inline ordered_json design_to_json(const Design& d) {
    const ParameterSet& p = d.params();
    ordered_json j;
    j["format"] = "qdesign/1";
    j["q"] = p.q();
    j["v"] = p.v();
    j["t"] = p.t();
    j["k"] = p.k();
    j["lambda"] = detail::int_to_json(p.lambda());
    ordered_json blocks = ordered_json::array();
    for (const auto& b : d.blocks()) blocks.push_back(b.key());
    j["blocks"] = std::move(blocks);
    return j;
}

inline Design design_from_json(const ordered_json& j, const std::string& where = "design") {
    if (!j.is_object()) throw FormatError(where + ": expected a JSON object");
    if (detail::field_of(j, "format", where) != "qdesign/1")
        throw FormatError(where + ": format is not 'qdesign/1'");
    unsigned q = detail::uint_from_json(detail::field_of(j, "q", where), where + ".q");
    unsigned v = detail::uint_from_json(detail::field_of(j, "v", where), where + ".v");
    unsigned t = detail::uint_from_json(detail::field_of(j, "t", where), where + ".t");
    unsigned k = detail::uint_from_json(detail::field_of(j, "k", where), where + ".k");
    Int lambda = detail::int_from_json(detail::field_of(j, "lambda", where), where + ".lambda");
    ParameterSet p(t, v, k, lambda, q);
    Field f(q);
    const ordered_json& jb = detail::field_of(j, "blocks", where);
    if (!jb.is_array()) throw FormatError(where + ".blocks: expected an array");
    std::vector<Subspace> blocks;
    std::unordered_set<Subspace, SubspaceHash> seen;
    blocks.reserve(jb.size());
    for (std::size_t i = 0; i < jb.size(); ++i) {
        std::string loc = where + ".blocks[" + std::to_string(i) + "]";
        if (!jb[i].is_string()) throw FormatError(loc + ": expected a string");
        Subspace b;
        try {
            b = decode_subspace(jb[i].get<std::string>(), v, f);
        } catch (const FormatError& e) {
            throw FormatError(loc + ": " + e.what());
        }
        if (b.dim() != k) throw FormatError(loc + ": block dimension is not k");
        if (!seen.insert(b).second) throw FormatError(loc + ": duplicate block");
        blocks.push_back(std::move(b));
    }
    return Design(p, f, std::move(blocks));
}

// ---------------------------------------------------------------------------
// qls/1
// ---------------------------------------------------------------------------

inline ordered_json large_set_to_json(const LargeSet& ls) {
    const ParameterSet& p = ls.member_params();
    ordered_json j;
    j["format"] = "qls/1";
    j["N"] = ls.N();
    ordered_json pj;
    pj["t"] = p.t();
    pj["v"] = p.v();
    pj["k"] = p.k();
    pj["lambda"] = detail::int_to_json(p.lambda());
    pj["q"] = p.q();
    j["params"] = std::move(pj);
    ordered_json members = ordered_json::array();
    for (const auto& d : ls.members()) members.push_back(design_to_json(d));
    j["members"] = std::move(members);
    return j;
}

inline LargeSet large_set_from_json(const ordered_json& j) {
    if (!j.is_object()) throw FormatError("large set: expected a JSON object");
    if (detail::field_of(j, "format", "large set") != "qls/1")
        throw FormatError("large set: format is not 'qls/1'");
    unsigned n = detail::uint_from_json(detail::field_of(j, "N", "large set"), "N");
    const ordered_json& pj = detail::field_of(j, "params", "large set");
    ParameterSet p(detail::uint_from_json(detail::field_of(pj, "t", "params"), "params.t"),
                   detail::uint_from_json(detail::field_of(pj, "v", "params"), "params.v"),
                   detail::uint_from_json(detail::field_of(pj, "k", "params"), "params.k"),
                   detail::int_from_json(detail::field_of(pj, "lambda", "params"), "params.lambda"),
                   detail::uint_from_json(detail::field_of(pj, "q", "params"), "params.q"));
    const ordered_json& jm = detail::field_of(j, "members", "large set");
    if (!jm.is_array()) throw FormatError("large set: members must be an array");
    if (jm.size() != n) throw FormatError("large set: N disagrees with the member count");
    std::vector<Design> members;
    members.reserve(n);
    for (std::size_t i = 0; i < jm.size(); ++i)
        members.push_back(design_from_json(jm[i], "members[" + std::to_string(i) + "]"));
    return LargeSet(p, std::move(members));
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw FormatError("failed writing '" + path + "'");
}

inline ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FormatError("'" + path + "': bad JSON: " + e.what());
    }
    return j;
}

inline void save_design(const Design& d, const std::string& path) {
    write_text_file(path, dump_json(design_to_json(d)));
}

inline Design load_design(const std::string& path) {
    return design_from_json(read_json_file(path), path);
}

inline void save_large_set(const LargeSet& ls, const std::string& path) {
    write_text_file(path, dump_json(large_set_to_json(ls)));
}

inline LargeSet load_large_set(const std::string& path) {
    return large_set_from_json(read_json_file(path));
}

} // namespace qdesign
