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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multipol/io.hpp"
#include "multipol/multilinear.hpp"
#include "multipol/multipolynomial.hpp"
#include "multipol/random.hpp"
#include "multipol/rational.hpp"
#include "multipol/verify.hpp"

namespace {

using multipol::DegreeSignature;
using multipol::MultiIndexMatrix;
using multipol::MultilinearMap;
using multipol::Multipolynomial;
using multipol::Rational;
using multipol::Vec;

using V = Vec<Rational>;
using PtList = std::vector<V>;

struct GlobalOptions {
    std::uint64_t seed = 1;
    int trials = 25;
    std::uint64_t max_signs = multipol::kDefaultMaxSigns;
    std::string format = "text";
};

std::vector<int> parse_signature(const std::string& s) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok.empty()) throw CLI::ValidationError("--signature", "expected comma-separated positive integers");
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--signature", "malformed integer '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// The two-slot coordinate-product multipolynomial
/// P((x1,x2),(y1,y2)) = x1 x2 y1 y2 over Q^2, signature (2,2).
Multipolynomial<Rational> coordinate_product_example() {
    Multipolynomial<Rational> P(DegreeSignature::equal(2, 2), 2, 1);
    MultiIndexMatrix key(2, 2);
    key(0, 0) = key(0, 1) = key(1, 0) = key(1, 1) = 1;
    V one = V::Zero(1);
    one[0] = Rational(1);
    P.set_coeff(key, one);
    return P;
}

int run_verify(const GlobalOptions& g, const std::string& identity, int m, int n, int dim, int codim,
               double sparsity, const std::string& signature, bool inject_defect) {
    multipol::IdentityParams params;
    params.m = m;
    params.n = n;
    params.dim = dim;
    params.codim = codim;
    params.trials = g.trials;
    params.seed = g.seed;
    params.sparsity = sparsity;
    params.max_signs = g.max_signs;
    params.inject_defect = inject_defect;
    if (!signature.empty()) params.signature = parse_signature(signature);

    multipol::VerificationReport report;
    try {
        report = multipol::run_identity(identity, params);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << (g.format == "json" ? multipol::render_report_json(report)
                                     : multipol::render_report_text(report));
    std::fprintf(stderr, "# elapsed_seconds=%.3f\n", report.elapsed_seconds);
    return report.pass() ? 0 : 1;
}

int run_eval(const GlobalOptions& g, const std::string& object_path, const std::string& points_path) {
    try {
        const auto obj = multipol::parse_object(multipol::read_file(object_path));
        const auto pts = multipol::parse_points(multipol::read_file(points_path));
        const V value = std::visit(
            [&](const auto& o) { return multipol::eval(o, std::span<const V>(pts)); }, obj);
        if (g.format == "json") {
            nlohmann::ordered_json j;
            j["value"] = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < value.size(); ++c) j["value"].push_back(value[c].str());
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << multipol::format_value(value) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_polarize(const GlobalOptions& g, const std::string& poly_path, const std::string& x0_path,
                 const std::string& output_path) {
    try {
        const auto obj = multipol::parse_object(multipol::read_file(poly_path));
        const auto* poly = std::get_if<Multipolynomial<Rational>>(&obj);
        if (!poly) throw std::invalid_argument("polarize expects a multipolynomial document");
        const auto hp = multipol::homogeneous_from_multipoly(*poly);
        V x0 = V::Zero(hp.dim());
        if (!x0_path.empty()) {
            const auto x0pts = multipol::parse_points(multipol::read_file(x0_path), hp.dim());
            if (x0pts.size() != 1) throw std::invalid_argument("x0 file must hold exactly one point");
            x0 = x0pts.front();
        }
        const auto A = multipol::polarize(hp, x0, g.max_signs);
        const std::string doc = multipol::serialize(A);
        if (output_path.empty())
            std::cout << doc;
        else
            multipol::write_file(output_path, doc);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_check_image(const GlobalOptions& g, const std::string& poly_path) {
    multipol::PsiWitness<Rational> witness;
    try {
        const auto obj = multipol::parse_object(multipol::read_file(poly_path));
        const auto* poly = std::get_if<Multipolynomial<Rational>>(&obj);
        if (!poly) throw std::invalid_argument("check-image expects a multipolynomial document");
        witness = multipol::in_image_psi(*poly, g.max_signs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (g.format == "json") {
        nlohmann::ordered_json j;
        j["member"] = witness.member;
        if (witness.member) {
            j["witness"] = multipol::serialize(*witness.witness);
        } else {
            const auto& d = *witness.defect;
            j["defect"]["x0"] = multipol::format_value(d.x0);
            j["defect"]["points"] = nlohmann::ordered_json::array();
            for (const auto& p : d.points) j["defect"]["points"].push_back(multipol::format_value(p));
            j["defect"]["direct"] = multipol::format_value(d.lhs);
            j["defect"]["entire_formula"] = multipol::format_value(d.rhs);
        }
        std::cout << j.dump(2) << "\n";
    } else if (witness.member) {
        std::cout << "member: true\n";
        std::cout << multipol::serialize(*witness.witness);
    } else {
        const auto& d = *witness.defect;
        std::cout << "member: false\n";
        std::cout << "defect x0: " << multipol::format_value(d.x0) << "\n";
        for (std::size_t i = 0; i < d.points.size(); ++i)
            std::cout << "defect point " << (i + 1) << ": " << multipol::format_value(d.points[i]) << "\n";
        std::cout << "direct value: " << multipol::format_value(d.lhs) << "\n";
        std::cout << "entire formula value: " << multipol::format_value(d.rhs) << "\n";
    }
    return witness.member ? 0 : 1;
}

int run_counterexample(const GlobalOptions& g) {
    const auto P = coordinate_product_example();
    const PtList pts{multipol::basis_vec<Rational>(2, 0), multipol::basis_vec<Rational>(2, 1)};
    const V zero = V::Zero(2);

    const Rational direct = multipol::eval(P, std::span<const V>(pts))[0];
    const Rational entire = multipol::entire_polarization_rhs(P, zero, std::span<const V>(pts), g.max_signs)[0];
    const Rational rem = multipol::remainder(P, std::span<const V>(pts), g.max_signs)[0];
    const Rational polarized = multipol::multipolarize(P, zero, std::span<const V>(pts), g.max_signs)[0];
    const bool member = multipol::in_image_psi(P, g.max_signs).member;

    const bool ok = direct == Rational(0) && entire == Rational(1, 6) && rem == Rational(16) &&
                    polarized == Rational(0) && !member;

    if (g.format == "json") {
        nlohmann::ordered_json j;
        j["multipolynomial"] = "x1 x2 y1 y2 on Q^2, signature (2,2)";
        j["direct_value"] = direct.str();
        j["entire_polarization_rhs"] = entire.str();
        j["remainder"] = rem.str();
        j["multipolynomial_polarization"] = polarized.str();
        j["in_image_psi"] = member;
        j["status"] = ok ? "OK" : "MISMATCH";
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "multipolynomial: x1 x2 y1 y2 on Q^2, signature (2,2)\n";
        std::cout << "direct value P(e1, e2):            " << direct.str() << "\n";
        std::cout << "entire polarization rhs at x0 = 0: " << entire.str() << "\n";
        std::cout << "remainder R(e1, e2):               " << rem.str() << "\n";
        std::cout << "multipolynomial polarization:      " << polarized.str() << "\n";
        std::cout << "in image of psi:                   " << (member ? "true" : "false") << "\n";
        std::cout << "status: " << (ok ? "OK" : "MISMATCH") << "\n";
    }
    return ok ? 0 : 1;
}

int run_bench(const GlobalOptions& g, int mn, int m_flag, int reps, int threads) {
    if (mn < 1 || mn > 24) {
        std::cerr << "error: --mn must lie in [1, 24]\n";
        return 2;
    }
    const int m = m_flag > 0 ? m_flag : (mn % 2 == 0 ? 2 : 1);
    if (mn % m != 0) {
        std::cerr << "error: --m must divide --mn\n";
        return 2;
    }
    const int n = mn / m;
    if (threads < 1) threads = 1;

    // fixed instance: one monomial per slot row, points on the basis
    const int d = 2;
    Multipolynomial<Rational> P(DegreeSignature::equal(m, n), d, 1);
    MultiIndexMatrix key(m, d);
    for (int i = 0; i < m; ++i) {
        key(i, 0) = 1;
        key(i, 1) = n - 1;
    }
    V one = V::Zero(1);
    one[0] = Rational(1);
    P.set_coeff(key, one);

    PtList pts;
    for (int i = 0; i < m; ++i) pts.push_back(multipol::basis_vec<Rational>(d, i % d));
    V x0 = V::Zero(d);
    x0[0] = x0[1] = Rational(1);

    const double terms = static_cast<double>(std::uint64_t{1} << mn);
    std::printf("kernel,threads,mn,terms,rep,seconds,terms_per_second\n");

    for (int rep = 0; rep < reps; ++rep) {
        const auto time_it = [&](auto&& fn) {
            const auto start = std::chrono::steady_clock::now();
            V value = fn();
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return std::pair<V, double>(std::move(value), secs);
        };

        const auto [naive, t_naive] =
            time_it([&] { return multipol::diagonal_sign_sum_naive(P, x0, std::span<const V>(pts), g.max_signs); });
        const auto [gray, t_gray] =
            time_it([&] { return multipol::diagonal_sign_sum(P, x0, std::span<const V>(pts), g.max_signs); });
        const auto [part, t_part] = time_it([&] {
            return multipol::diagonal_sign_sum_partitioned(P, x0, std::span<const V>(pts), threads, g.max_signs);
        });

        if (!multipol::vec_equal(naive, gray) || !multipol::vec_equal(naive, part)) {
            std::cerr << "error: kernel results disagree (naive=" << multipol::format_value(naive)
                      << ", gray=" << multipol::format_value(gray) << ", partitioned=" << multipol::format_value(part)
                      << ")\n";
            return 1;
        }

        std::printf("naive,1,%d,%.0f,%d,%.6f,%.1f\n", mn, terms, rep, t_naive, terms / t_naive);
        std::printf("gray,1,%d,%.0f,%d,%.6f,%.1f\n", mn, terms, rep, t_gray, terms / t_gray);
        std::printf("gray,%d,%d,%.0f,%d,%.6f,%.1f\n", threads, mn, terms, rep, t_part, terms / t_part);
    }
    std::fprintf(stderr, "# kernels agree exactly\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification toolkit for multilinear maps, homogeneous polynomials and multipolynomials"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "PRNG seed (mt19937_64)")->capture_default_str();
    app.add_option("--trials", g.trials, "number of random trials")->capture_default_str();
    app.add_option("--max-signs", g.max_signs, "sign-vector enumeration guard")->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run an identity-verification suite");
    verify->fallthrough();
    std::string identity;
    int m = 2, n = 2, dim = 2, codim = 1;
    double sparsity = 1.0;
    std::string signature;
    bool inject_defect = false;
    std::string names;
    for (const auto& s : multipol::identity_names()) names += (names.empty() ? "" : ", ") + s;
    verify->add_option("identity", identity, "one of: " + names)->required();
    verify->add_option("--m", m, "slot count / arity")->capture_default_str();
    verify->add_option("--n", n, "slot degree (or point count where applicable)")->capture_default_str();
    verify->add_option("--dim", dim, "domain dimension")->capture_default_str();
    verify->add_option("--codim", codim, "codomain dimension")->capture_default_str();
    verify->add_option("--sparsity", sparsity, "fraction of coefficient keys populated")->capture_default_str();
    verify->add_option("--signature", signature, "explicit signature, e.g. 2,1 (overrides --m/--n)");
    verify->add_flag("--inject-defect", inject_defect, "testing hook: perturb one computed side");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a serialized object at points");
    eval_cmd->fallthrough();
    std::string eval_object, eval_points;
    eval_cmd->add_option("object", eval_object, "object document")->required();
    eval_cmd->add_option("points", eval_points, "points file (one point per line)")->required();

    auto* polarize_cmd = app.add_subcommand("polarize", "symmetric multilinear map of a homogeneous polynomial");
    polarize_cmd->fallthrough();
    std::string pol_input, pol_x0, pol_output;
    polarize_cmd->add_option("polynomial", pol_input, "one-slot multipolynomial document")->required();
    polarize_cmd->add_option("--x0", pol_x0, "optional base-point file (defaults to 0)");
    polarize_cmd->add_option("-o,--output", pol_output, "write the map document here instead of stdout");

    auto* check_cmd = app.add_subcommand("check-image", "decide membership in the image of psi");
    check_cmd->fallthrough();
    std::string check_input;
    check_cmd->add_option("polynomial", check_input, "symmetric equal-degrees multipolynomial document")->required();

    auto* counter_cmd = app.add_subcommand("counterexample", "reproduce the coordinate-product counterexample");
    counter_cmd->fallthrough();

    auto* bench_cmd = app.add_subcommand("bench", "sign-sum kernel throughput (CSV)");
    bench_cmd->fallthrough();
    int bench_mn = 8, bench_m = 0, bench_reps = 3;
    int bench_threads = static_cast<int>(std::thread::hardware_concurrency());
    bench_cmd->add_option("--mn", bench_mn, "total sign count mn")->capture_default_str();
    bench_cmd->add_option("--m", bench_m, "slot count (default: 2 when mn is even, else 1)");
    bench_cmd->add_option("--reps", bench_reps, "measurement repetitions")->capture_default_str();
    bench_cmd->add_option("--threads", bench_threads, "partitioned-kernel thread count")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed())
            return run_verify(g, identity, m, n, dim, codim, sparsity, signature, inject_defect);
        if (eval_cmd->parsed()) return run_eval(g, eval_object, eval_points);
        if (polarize_cmd->parsed()) return run_polarize(g, pol_input, pol_x0, pol_output);
        if (check_cmd->parsed()) return run_check_image(g, check_input);
        if (counter_cmd->parsed()) return run_counterexample(g);
        if (bench_cmd->parsed()) return run_bench(g, bench_mn, bench_m, bench_reps, bench_threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
