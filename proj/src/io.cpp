/*
   Copyright 2026 The multipol authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "multipol/io.hpp"

#include <fstream>
#include <sstream>

namespace multipol {

namespace {

std::vector<std::string> split_tokens(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

struct LineReader {
    std::vector<std::string> lines;
    int next = 0;  // 0-based index of the next line

    explicit LineReader(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) {
                if (start < text.size()) lines.emplace_back(text.substr(start));
                break;
            }
            lines.emplace_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }

    int line_no() const { return next + 1; }
    bool eof() const { return next >= static_cast<int>(lines.size()); }

    std::vector<std::string> expect_line(const char* what) {
        if (eof()) throw ParseError(line_no(), std::string("unexpected end of document, expected ") + what);
        auto toks = split_tokens(lines[static_cast<std::size_t>(next)]);
        ++next;
        if (toks.empty()) throw ParseError(line_no() - 1, std::string("blank line, expected ") + what);
        return toks;
    }
};

int parse_int(const std::string& tok, int line, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("malformed integer for ") + what + ": '" + tok + "'");
    }
}

Rational parse_rational(const std::string& tok, int line) {
    try {
        return Rational::from_string(tok);
    } catch (const std::exception&) {
        throw ParseError(line, "malformed rational: '" + tok + "'");
    }
}

int expect_field(LineReader& r, const char* name) {
    const auto toks = r.expect_line(name);
    const int line = r.line_no() - 1;
    if (toks.size() != 2 || toks[0] != name)
        throw ParseError(line, std::string("expected '") + name + " <value>'");
    return parse_int(toks[1], line, name);
}

void append_value(std::string& out, const Vec<Rational>& v) {
    for (Eigen::Index c = 0; c < v.size(); ++c) {
        out += ' ';
        out += v[c].str();
    }
}

MultilinearMap<Rational> parse_multilinear(LineReader& r) {
    const int m = expect_field(r, "m");
    const int dim = expect_field(r, "dim");
    const int codim = expect_field(r, "codim");
    const int header_line = r.line_no();
    const int nterms = expect_field(r, "terms");
    if (nterms < 0) throw ParseError(header_line, "negative term count");

    MultilinearMap<Rational> A = [&] {
        try {
            return MultilinearMap<Rational>(m, dim, codim);
        } catch (const std::exception& e) {
            throw ParseError(header_line, e.what());
        }
    }();

    for (int t = 0; t < nterms; ++t) {
        const auto toks = r.expect_line("a term line");
        const int line = r.line_no() - 1;
        if (static_cast<int>(toks.size()) != m + codim)
            throw ParseError(line, "term line must hold " + std::to_string(m) + " indices and " +
                                       std::to_string(codim) + " coefficients");
        std::vector<int> key(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            const int j = parse_int(toks[static_cast<std::size_t>(k)], line, "index");
            if (j < 1 || j > dim) throw ParseError(line, "index out of range [1, dim]");
            key[static_cast<std::size_t>(k)] = j - 1;
        }
        Vec<Rational> val = Vec<Rational>::Zero(codim);
        for (int c = 0; c < codim; ++c) val[c] = parse_rational(toks[static_cast<std::size_t>(m + c)], line);
        if (A.terms().count(key)) throw ParseError(line, "duplicate term key");
        A.set_coeff(key, std::move(val));
    }
    return A;
}

Multipolynomial<Rational> parse_multipolynomial(LineReader& r) {
    const int m = expect_field(r, "m");

    const auto deg_toks = r.expect_line("degrees");
    const int deg_line = r.line_no() - 1;
    if (deg_toks.size() != static_cast<std::size_t>(m) + 1 || deg_toks[0] != "degrees")
        throw ParseError(deg_line, "expected 'degrees n_1 ... n_m'");
    std::vector<int> degrees(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) degrees[static_cast<std::size_t>(j)] = parse_int(deg_toks[static_cast<std::size_t>(j) + 1], deg_line, "degree");

    const int dim = expect_field(r, "dim");
    const int codim = expect_field(r, "codim");
    const int header_line = r.line_no();
    const int nterms = expect_field(r, "terms");
    if (nterms < 0) throw ParseError(header_line, "negative term count");

    Multipolynomial<Rational> P = [&] {
        try {
            return Multipolynomial<Rational>(DegreeSignature(std::move(degrees)), dim, codim);
        } catch (const std::exception& e) {
            throw ParseError(deg_line, e.what());
        }
    }();

    const int key_len = m * dim;
    for (int t = 0; t < nterms; ++t) {
        const auto toks = r.expect_line("a term line");
        const int line = r.line_no() - 1;
        if (static_cast<int>(toks.size()) != key_len + codim)
            throw ParseError(line, "term line must hold " + std::to_string(key_len) + " exponents and " +
                                       std::to_string(codim) + " coefficients");
        std::vector<int> flat(static_cast<std::size_t>(key_len));
        for (int k = 0; k < key_len; ++k) {
            const int e = parse_int(toks[static_cast<std::size_t>(k)], line, "exponent");
            if (e < 0) throw ParseError(line, "negative exponent");
            flat[static_cast<std::size_t>(k)] = e;
        }
        Vec<Rational> val = Vec<Rational>::Zero(codim);
        for (int c = 0; c < codim; ++c) val[c] = parse_rational(toks[static_cast<std::size_t>(key_len + c)], line);
        MultiIndexMatrix key(m, dim, std::move(flat));
        if (P.terms().count(key)) throw ParseError(line, "duplicate term key");
        try {
            P.set_coeff(key, std::move(val));
        } catch (const std::exception& e) {
            throw ParseError(line, e.what());
        }
    }
    return P;
}

}  // namespace

std::string serialize(const MultilinearMap<Rational>& A) {
    std::string out;
    out += "kind multilinear\n";
    out += "m " + std::to_string(A.arity()) + "\n";
    out += "dim " + std::to_string(A.dim()) + "\n";
    out += "codim " + std::to_string(A.codim()) + "\n";
    out += "terms " + std::to_string(A.terms().size()) + "\n";
    for (const auto& [key, val] : A.terms()) {
        std::string line;
        for (std::size_t k = 0; k < key.size(); ++k) {
            if (k) line += ' ';
            line += std::to_string(key[k] + 1);
        }
        append_value(line, val);
        out += line;
        out += '\n';
    }
    return out;
}

std::string serialize(const Multipolynomial<Rational>& P) {
    std::string out;
    out += "kind multipolynomial\n";
    out += "m " + std::to_string(P.slots()) + "\n";
    out += "degrees";
    for (int j = 0; j < P.slots(); ++j) out += ' ' + std::to_string(P.signature().degree(j));
    out += '\n';
    out += "dim " + std::to_string(P.dim()) + "\n";
    out += "codim " + std::to_string(P.codim()) + "\n";
    out += "terms " + std::to_string(P.terms().size()) + "\n";
    for (const auto& [key, val] : P.terms()) {
        std::string line;
        bool first = true;
        for (int i = 0; i < key.rows(); ++i)
            for (int j = 0; j < key.cols(); ++j) {
                if (!first) line += ' ';
                first = false;
                line += std::to_string(key(i, j));
            }
        append_value(line, val);
        out += line;
        out += '\n';
    }
    return out;
}

SerializedObject parse_object(std::string_view text) {
    LineReader r(text);
    const auto kind = r.expect_line("'kind multilinear' or 'kind multipolynomial'");
    if (kind.size() != 2 || kind[0] != "kind")
        throw ParseError(r.line_no() - 1, "expected 'kind multilinear' or 'kind multipolynomial'");

    SerializedObject obj = [&]() -> SerializedObject {
        if (kind[1] == "multilinear") return parse_multilinear(r);
        if (kind[1] == "multipolynomial") return parse_multipolynomial(r);
        throw ParseError(r.line_no() - 1, "unknown kind '" + kind[1] + "'");
    }();

    while (!r.eof()) {
        if (!split_tokens(r.lines[static_cast<std::size_t>(r.next)]).empty())
            throw ParseError(r.line_no(), "trailing content after the terms list");
        ++r.next;
    }
    return obj;
}

std::string serialize_points(std::span<const Vec<Rational>> pts) {
    std::string out;
    for (const auto& p : pts) {
        for (Eigen::Index c = 0; c < p.size(); ++c) {
            if (c) out += ' ';
            out += p[c].str();
        }
        out += '\n';
    }
    return out;
}

std::vector<Vec<Rational>> parse_points(std::string_view text, int expected_dim) {
    LineReader r(text);
    std::vector<Vec<Rational>> pts;
    while (!r.eof()) {
        const auto toks = split_tokens(r.lines[static_cast<std::size_t>(r.next)]);
        const int line = r.line_no();
        ++r.next;
        if (toks.empty()) {
            if (!r.eof()) throw ParseError(line, "blank line inside a points file");
            break;
        }
        if (expected_dim >= 0 && static_cast<int>(toks.size()) != expected_dim)
            throw ParseError(line, "point has " + std::to_string(toks.size()) + " coordinates, expected " +
                                       std::to_string(expected_dim));
        Vec<Rational> p = Vec<Rational>::Zero(static_cast<Eigen::Index>(toks.size()));
        for (std::size_t c = 0; c < toks.size(); ++c) p[static_cast<Eigen::Index>(c)] = parse_rational(toks[c], line);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw ParseError(1, "points file holds no points");
    return pts;
}

std::string format_value(const Vec<Rational>& v) {
    std::string out;
    for (Eigen::Index c = 0; c < v.size(); ++c) {
        if (c) out += ' ';
        out += v[c].str();
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing file: " + path);
}

}  // namespace multipol
