#pragma once

// Text control-net format:
//   iganet v1
//   n m
//   <knots xi, space separated>
//   <knots eta, space separated>
//   n*m lines "x y", i running fastest

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace igahelm {

/// Shortest decimal form that round-trips a double (at most 17 significant digits).
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Fixed 17-significant-digit form, used for tables and exports.
inline std::string format_double17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline double parse_real(std::string_view tok, int line, const std::string& field) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError("invalid number '" + std::string(tok) + "' in " + field, line);
    return v;
}

inline std::size_t parse_count(std::string_view tok, int line, const std::string& field) {
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError("invalid integer '" + std::string(tok) + "' in " + field, line);
    return v;
}

} // namespace detail

inline void write_net(std::ostream& os, const ControlNet& net) {
    os << "iganet v1\n" << net.n() << ' ' << net.m() << '\n';
    for (const auto* kv : {&net.kv_xi(), &net.kv_eta()}) {
        const auto& k = kv->knots();
        for (std::size_t i = 0; i < k.size(); ++i) os << (i ? " " : "") << format_double17(k[i]);
        os << '\n';
    }
    for (const auto& p : net.points().flat()) os << format_double17(p.x) << ' ' << format_double17(p.y) << '\n';
}

inline void save_net(const ControlNet& net, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("save_net: cannot open " + path.string() + " for writing");
    write_net(os, net);
    if (!os) throw Error("save_net: write failed for " + path.string());
}

/// Parse a control net. Nets with negative signed area (clockwise orientation) are rejected.
inline ControlNet read_net(std::istream& is) {
    std::string line;
    int lineno = 0;
    auto next = [&](const char* what) -> std::string& {
        if (!std::getline(is, line)) throw ParseError(std::string("unexpected end of file, expected ") + what, lineno + 1);
        ++lineno;
        return line;
    };

    {
        const auto toks = detail::split_ws(next("header"));
        if (toks.size() != 2 || toks[0] != "iganet" || toks[1] != "v1")
            throw ParseError("header must be 'iganet v1'", lineno);
    }
    std::size_t n = 0, m = 0;
    {
        const auto toks = detail::split_ws(next("dimensions"));
        if (toks.size() != 2) throw ParseError("expected 'n m'", lineno);
        n = detail::parse_count(toks[0], lineno, "n");
        m = detail::parse_count(toks[1], lineno, "m");
    }
    auto read_knots = [&](const char* which) {
        const auto toks = detail::split_ws(next(which));
        std::vector<double> k;
        for (const auto& t : toks) k.push_back(detail::parse_real(t, lineno, which));
        try {
            return KnotVector(std::move(k));
        } catch (const ValidationError& e) {
            throw ParseError(std::string(which) + ": " + e.what(), lineno);
        }
    };
    KnotVector kx = read_knots("knots xi");
    KnotVector ky = read_knots("knots eta");
    if (kx.basis_count() != n || ky.basis_count() != m)
        throw ValidationError("read_net: header declares " + std::to_string(n) + "x" + std::to_string(m) +
                              " but knot vectors give " + std::to_string(kx.basis_count()) + "x" +
                              std::to_string(ky.basis_count()));

    std::vector<Point2> pts;
    pts.reserve(n * m);
    while (std::getline(is, line)) {
        ++lineno;
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != 2) throw ParseError("expected 'x y'", lineno);
        pts.push_back({detail::parse_real(toks[0], lineno, "x"), detail::parse_real(toks[1], lineno, "y")});
    }
    if (pts.size() != n * m)
        throw ValidationError("read_net: expected " + std::to_string(n * m) + " control points, found " +
                              std::to_string(pts.size()));

    ControlNet net(std::move(kx), std::move(ky), Grid2<Point2>(n, m, std::move(pts)));

    double signed_area = 0.0;
    for (const auto& ey : elements(net.kv_eta()))
        for (const auto& ex : elements(net.kv_xi()))
            for (const auto& q : gauss_rule(3, ex.a, ex.b, ey.a, ey.b).points)
                signed_area += q.weight * jacobian_matrix(net, q.xi, q.eta).det();
    if (!(signed_area > 0.0)) throw ValidationError("read_net: net has negative orientation (det J < 0)");
    return net;
}

inline ControlNet load_net(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("load_net: cannot open " + path.string());
    return read_net(is);
}

} // namespace igahelm
