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

#include "multipol/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "multipol/io.hpp"
#include "multipol/multilinear.hpp"
#include "multipol/multipolynomial.hpp"
#include "multipol/random.hpp"

namespace multipol {

namespace {

using V = Vec<Rational>;
using PtList = std::vector<Vec<Rational>>;

constexpr std::uint64_t kPointStream = 0x706F696E7473ULL;   // decorrelates point draws
constexpr std::uint64_t kScalarStream = 0x7363616C6172ULL;  // ... and scalar draws

PtList draw_points(Rng& rng, int count, int dim, const GeneratorConfig& cfg) {
    PtList pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(random_point(rng, dim, cfg));
    return pts;
}

std::string signature_str(const DegreeSignature& sig) {
    std::string s = "(";
    for (int j = 0; j < sig.slots(); ++j) {
        if (j) s += ',';
        s += std::to_string(sig.degree(j));
    }
    return s + ")";
}

struct SuiteRun {
    explicit SuiteRun(const IdentityParams& p) : params(p) {}

    const IdentityParams& params;
    VerificationReport report;

    GeneratorConfig trial_cfg(int trial, std::uint64_t salt = 0) const {
        GeneratorConfig cfg;
        cfg.seed = trial_seed(params.seed, trial) ^ salt;
        cfg.sparsity = params.sparsity;
        return cfg;
    }

    Rng point_rng(int trial) const { return Rng(trial_seed(params.seed, trial) ^ kPointStream); }
    Rng scalar_rng(int trial) const { return Rng(trial_seed(params.seed, trial) ^ kScalarStream); }

    bool inject(int trial) const { return params.inject_defect && trial == 0; }

    void check_values(int trial, const std::string& check, const V& lhs, V rhs, const std::string& input) {
        if (inject(trial)) rhs[0] += Rational(1);
        if (!vec_equal(lhs, rhs))
            report.failures.push_back({trial, check, format_value(lhs), format_value(rhs), input});
    }

    void check_strings(int trial, const std::string& check, const std::string& lhs, std::string rhs,
                       const std::string& input) {
        if (inject(trial)) rhs += "# injected defect\n";
        if (lhs != rhs) report.failures.push_back({trial, check, lhs, rhs, input});
    }

    void check_flag(int trial, const std::string& check, bool ok, const std::string& input) {
        const bool value = inject(trial) ? !ok : ok;
        if (!value) report.failures.push_back({trial, check, "false", "true", input});
    }
};

void run_leibniz(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto A = random_multilinear(run.trial_cfg(t), p.m, p.dim, p.codim, true);
        auto prng = run.point_rng(t);
        const auto pts = draw_points(prng, p.n, p.dim, run.trial_cfg(t));
        const auto [lhs, rhs] = verify_leibniz(A, std::span<const V>(pts));
        run.check_values(t, "leibniz expansion sides", lhs, rhs, serialize(A) + serialize_points(pts));
        ++run.report.trials_run;
    }
}

void run_polarization_roundtrip(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto A = random_multilinear(run.trial_cfg(t), p.m, p.dim, p.codim, true);
        const auto back = polarize(hat(A), p.max_signs);
        run.check_strings(t, "polarize(hat(A)) == A", serialize(A), serialize(back), serialize(A));

        const auto P = random_homogeneous(run.trial_cfg(t, 0xF00D), p.m, p.dim, p.codim);
        const auto AP = polarize(P, p.max_signs);
        const std::string p_doc = serialize(multipoly_from_homogeneous(P));
        run.check_strings(t, "hat(polarize(P)) == P", p_doc, serialize(multipoly_from_homogeneous(hat(AP))),
                          p_doc);

        auto prng = run.point_rng(t);
        const auto x0 = random_point(prng, p.dim, run.trial_cfg(t));
        const auto shifted = polarize(P, x0, p.max_signs);
        run.check_strings(t, "polarize is x0-invariant", serialize(AP), serialize(shifted), p_doc);
        ++run.report.trials_run;
    }
}

void run_eq_c(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto P =
            random_multipolynomial(run.trial_cfg(t), DegreeSignature::equal(p.m, p.n), p.dim, p.codim, false);
        auto prng = run.point_rng(t);
        auto srng = run.scalar_rng(t);
        const auto pts = draw_points(prng, p.dim, p.dim, run.trial_cfg(t));
        std::vector<Rational> lambdas;
        for (int j = 0; j < p.dim; ++j) lambdas.push_back(random_rational(srng, run.trial_cfg(t)));
        const auto [lhs, rhs] =
            expand_combination(P, std::span<const V>(pts), std::span<const Rational>(lambdas), p.max_signs);
        run.check_values(t, "combined expansion sides", lhs, rhs, serialize(P) + serialize_points(pts));
        ++run.report.trials_run;
    }
}

std::vector<DegreeSignature> signature_list(const IdentityParams& p,
                                            const std::vector<std::vector<int>>& fallback) {
    std::vector<DegreeSignature> sigs;
    if (p.signature)
        sigs.emplace_back(*p.signature);
    else
        for (const auto& s : fallback) sigs.emplace_back(s);
    return sigs;
}

void run_thm_2_1(SuiteRun& run) {
    const auto& p = run.params;
    const auto sigs = signature_list(p, {{1}, {2}, {1, 1}, {2, 1}, {2, 2}});
    for (int t = 0; t < p.trials; ++t) {
        for (const auto& sig : sigs) {
            const auto P = random_multipolynomial(run.trial_cfg(t), sig, p.dim, p.codim, false);
            const auto coeffs = basis_coefficients(P, p.max_signs);
            auto prng = run.point_rng(t);
            for (int rep = 0; rep < 20; ++rep) {
                const auto pts = draw_points(prng, sig.slots(), p.dim, run.trial_cfg(t));
                const V direct = eval(P, std::span<const V>(pts));
                const V rebuilt = reconstruct_from_basis_coefficients(coeffs, sig, p.codim, std::span<const V>(pts));
                run.check_values(t, "basis reconstruction, signature " + signature_str(sig), direct, rebuilt,
                                 serialize(P) + serialize_points(pts));
            }
        }
        ++run.report.trials_run;
    }
}

void run_cor_2_2(SuiteRun& run) {
    const auto& p = run.params;
    const auto sigs = signature_list(p, {{1}, {2}, {1, 1}, {2, 1}, {2, 2}});
    for (int t = 0; t < p.trials; ++t) {
        for (const auto& sig : sigs) {
            const int m = sig.slots();
            const int M = sig.total();
            const auto P = random_multipolynomial(run.trial_cfg(t), sig, p.dim, p.codim, false);
            const auto A = diagonal_embed(P, p.max_signs);
            auto prng = run.point_rng(t);
            for (int rep = 0; rep < 20; ++rep) {
                const auto pts = draw_points(prng, m, p.dim, run.trial_cfg(t));
                V u = V::Zero(m * p.dim);
                for (int i = 0; i < m; ++i)
                    for (int c = 0; c < p.dim; ++c) u[i * p.dim + c] = pts[static_cast<std::size_t>(i)][c];
                const PtList diag{u};
                const V on_diag = power_eval(A, std::span<const V>(diag), MultiIndex(std::vector<int>{M}));
                run.check_values(t, "diagonal agreement, signature " + signature_str(sig),
                                 eval(P, std::span<const V>(pts)), on_diag, serialize(P) + serialize_points(pts));
            }

            // slotwise linearity spot check of the embedded map
            const int slot = t % M;
            auto args = draw_points(prng, M, m * p.dim, run.trial_cfg(t));
            const V x = random_point(prng, m * p.dim, run.trial_cfg(t));
            const V y = random_point(prng, m * p.dim, run.trial_cfg(t));
            auto srng = run.scalar_rng(t);
            const Rational lam = random_rational(srng, run.trial_cfg(t));
            args[static_cast<std::size_t>(slot)] = x + y * lam;
            const V combined = eval(A, std::span<const V>(args));
            args[static_cast<std::size_t>(slot)] = x;
            const V at_x = eval(A, std::span<const V>(args));
            args[static_cast<std::size_t>(slot)] = y;
            const V at_y = eval(A, std::span<const V>(args));
            run.check_values(t, "slotwise linearity, signature " + signature_str(sig), combined,
                             V(at_x + at_y * lam), serialize(P));
        }
        ++run.report.trials_run;
    }
}

void run_remainder_n1(SuiteRun& run) {
    const auto& p = run.params;
    const auto sig = DegreeSignature::equal(p.m, 1);
    for (int t = 0; t < p.trials; ++t) {
        const auto P = random_multipolynomial(run.trial_cfg(t), sig, p.dim, p.codim, false);
        auto prng = run.point_rng(t);
        const auto pts = draw_points(prng, p.m, p.dim, run.trial_cfg(t));
        run.check_values(t, "remainder vanishes at n=1", remainder(P, std::span<const V>(pts), p.max_signs),
                         V::Zero(p.codim), serialize(P) + serialize_points(pts));

        const auto Ps = random_multipolynomial(run.trial_cfg(t, 0xBEEF), sig, p.dim, p.codim, true);
        const auto As = multilinear_from_multipoly(Ps);
        const V x0 = random_point(prng, p.dim, run.trial_cfg(t));
        const V classical = polarization_value(hat(As), x0, std::span<const V>(pts), p.max_signs);
        run.check_values(t, "multipolarize matches the classical polarization value at n=1",
                         multipolarize(Ps, x0, std::span<const V>(pts), p.max_signs), classical,
                         serialize(Ps) + serialize_points(pts));
        run.check_values(t, "classical polarization value equals direct evaluation", classical,
                         eval(Ps, std::span<const V>(pts)), serialize(Ps) + serialize_points(pts));
        ++run.report.trials_run;
    }
}

void run_multipolarization(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto P =
            random_multipolynomial(run.trial_cfg(t), DegreeSignature::equal(p.m, p.n), p.dim, p.codim, true);
        auto prng = run.point_rng(t);
        const auto pts = draw_points(prng, p.m, p.dim, run.trial_cfg(t));
        const V direct = eval(P, std::span<const V>(pts));
        const V zero = V::Zero(p.dim);
        run.check_values(t, "multipolarize at x0 = 0", multipolarize(P, zero, std::span<const V>(pts), p.max_signs),
                         direct, serialize(P) + serialize_points(pts));
        const V x0 = random_point(prng, p.dim, run.trial_cfg(t));
        run.check_values(t, "multipolarize at random x0",
                         multipolarize(P, x0, std::span<const V>(pts), p.max_signs), direct,
                         serialize(P) + serialize_points(pts));
        ++run.report.trials_run;
    }
}

void run_x0_invariance(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto P =
            random_multipolynomial(run.trial_cfg(t), DegreeSignature::equal(p.m, p.n), p.dim, p.codim, false);
        auto prng = run.point_rng(t);
        const auto pts = draw_points(prng, p.m, p.dim, run.trial_cfg(t));
        const V zero = V::Zero(p.dim);
        const V x0 = random_point(prng, p.dim, run.trial_cfg(t));
        run.check_values(t, "diagonal sign sum is x0-invariant",
                         diagonal_sign_sum(P, zero, std::span<const V>(pts), p.max_signs),
                         diagonal_sign_sum(P, x0, std::span<const V>(pts), p.max_signs),
                         serialize(P) + serialize_points(pts));
        ++run.report.trials_run;
    }
}

void run_entire_polarization(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto A = random_multilinear(run.trial_cfg(t), p.m * p.n, p.dim, p.codim, true);
        const auto P = psi(A, p.m, p.n);
        auto prng = run.point_rng(t);
        const V zero = V::Zero(p.dim);

        std::vector<int> tuple(static_cast<std::size_t>(p.m), 0);
        while (true) {
            PtList pts;
            for (int j : tuple) pts.push_back(basis_vec<Rational>(p.dim, j));
            run.check_values(t, "entire formula on a basis tuple",
                             eval(P, std::span<const V>(pts)),
                             entire_polarization_rhs(P, zero, std::span<const V>(pts), p.max_signs), serialize(P));
            int k = p.m - 1;
            while (k >= 0) {
                if (++tuple[static_cast<std::size_t>(k)] < p.dim) break;
                tuple[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
        }

        for (int rep = 0; rep < 10; ++rep) {
            const auto pts = draw_points(prng, p.m, p.dim, run.trial_cfg(t));
            const V x0 = random_point(prng, p.dim, run.trial_cfg(t));
            run.check_values(t, "entire formula on a random tuple", eval(P, std::span<const V>(pts)),
                             entire_polarization_rhs(P, x0, std::span<const V>(pts), p.max_signs),
                             serialize(P) + serialize_points(pts));
        }
        ++run.report.trials_run;
    }
}

void run_psi_roundtrip(SuiteRun& run) {
    const auto& p = run.params;
    for (int t = 0; t < p.trials; ++t) {
        const auto A = random_multilinear(run.trial_cfg(t), p.m * p.n, p.dim, p.codim, true);
        const auto P = psi(A, p.m, p.n);
        const auto witness = in_image_psi(P, p.max_signs);
        run.check_flag(t, "psi(A) recognized as a member", witness.member, serialize(A));
        if (witness.member)
            run.check_strings(t, "membership witness recovers A", serialize(A), serialize(*witness.witness),
                              serialize(A));

        const auto B = random_multilinear(run.trial_cfg(t, 0xB00B), p.m * p.n, p.dim, p.codim, true);
        auto srng = run.scalar_rng(t);
        const Rational lam = random_rational(srng, run.trial_cfg(t));
        const auto combo = psi(A + (lam * B), p.m, p.n);
        const auto split = psi(A, p.m, p.n) + (lam * psi(B, p.m, p.n));
        run.check_strings(t, "psi is linear", serialize(combo), serialize(split), serialize(A) + serialize(B));
        ++run.report.trials_run;
    }
}

void run_signed_power_sum(SuiteRun& run) {
    const auto& p = run.params;
    const int max_n = std::max(p.n, 6);
    for (int n = 1; n <= max_n; ++n) {
        for (int q = 0; q <= n; ++q) {
            const Rational got = signed_power_sum(n, q, p.max_signs);
            const Rational expected = q < n ? Rational(0) : factorial_scalar(n) * pow_int(Rational(2), n);
            V lhs = V::Zero(1), rhs = V::Zero(1);
            lhs[0] = got;
            rhs[0] = expected;
            run.check_values(run.report.trials_run, "signed power sum n=" + std::to_string(n) + " p=" + std::to_string(q),
                             lhs, rhs, "");
            ++run.report.trials_run;
        }
    }
}

void run_nullspace(SuiteRun& run) {
    const auto& p = run.params;
    std::vector<DegreeSignature> sigs;
    if (p.signature) {
        DegreeSignature sig(*p.signature);
        if (sig.equal_degrees())
            throw std::invalid_argument("nullspace: requires a mixed signature");
        sigs.push_back(std::move(sig));
    } else {
        sigs.emplace_back(std::vector<int>{1, 2});
        sigs.emplace_back(std::vector<int>{2, 3});
    }

    for (int t = 0; t < p.trials; ++t) {
        for (const auto& sig : sigs) {
            auto P = random_multipolynomial(run.trial_cfg(t), sig, p.dim, p.codim, false);
            for (std::uint64_t salt = 1; P.is_zero() && salt <= 8; ++salt)
                P = random_multipolynomial(run.trial_cfg(t, salt), sig, p.dim, p.codim, false);
            if (!P.is_zero())
                run.check_flag(t, "nonzero mixed-signature multipolynomial is asymmetric, signature " +
                                      signature_str(sig),
                               !is_symmetric(P), serialize(P));

            bool rejected = false;
            try {
                (void)random_multipolynomial(run.trial_cfg(t), sig, p.dim, p.codim, true);
            } catch (const std::domain_error&) {
                rejected = true;
            }
            run.check_flag(t, "symmetric construction rejected, signature " + signature_str(sig), rejected, "");
        }
        ++run.report.trials_run;
    }
}

using SuiteFn = void (*)(SuiteRun&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> table{
        {"leibniz", run_leibniz},
        {"polarization-roundtrip", run_polarization_roundtrip},
        {"eq-c", run_eq_c},
        {"thm-2-1", run_thm_2_1},
        {"cor-2-2", run_cor_2_2},
        {"remainder-n1", run_remainder_n1},
        {"multipolarization", run_multipolarization},
        {"x0-invariance", run_x0_invariance},
        {"entire-polarization", run_entire_polarization},
        {"psi-roundtrip", run_psi_roundtrip},
        {"signed-power-sum", run_signed_power_sum},
        {"nullspace", run_nullspace},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : suites()) out.push_back(name);
        return out;
    }();
    return names;
}

VerificationReport run_identity(const std::string& name, const IdentityParams& params) {
    const SuiteFn* fn = nullptr;
    for (const auto& [n, f] : suites())
        if (n == name) fn = &f;
    if (!fn) throw std::invalid_argument("unknown identity '" + name + "'");

    SuiteRun run(params);
    run.report.identity = name;
    run.report.params = {
        {"m", std::to_string(params.m)},
        {"n", std::to_string(params.n)},
        {"dim", std::to_string(params.dim)},
        {"codim", std::to_string(params.codim)},
        {"trials", std::to_string(params.trials)},
        {"seed", std::to_string(params.seed)},
        {"sparsity", [&] {
             std::ostringstream ss;
             ss << params.sparsity;
             return ss.str();
         }()},
        {"max-signs", std::to_string(params.max_signs)},
    };
    if (params.signature) {
        std::string s;
        for (std::size_t i = 0; i < params.signature->size(); ++i) {
            if (i) s += ',';
            s += std::to_string((*params.signature)[i]);
        }
        run.report.params.emplace_back("signature", s);
    }

    const auto start = std::chrono::steady_clock::now();
    (*fn)(run);
    run.report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run.report;
}

std::string render_report_text(const VerificationReport& report) {
    std::string out;
    out += "identity: " + report.identity + "\n";
    out += "params:";
    for (const auto& [k, v] : report.params) out += " " + k + "=" + v;
    out += "\n";
    out += "trials: " + std::to_string(report.trials_run) + "\n";
    out += "failures: " + std::to_string(report.failures.size()) + "\n";
    for (const auto& f : report.failures) {
        out += "failure: trial=" + std::to_string(f.trial) + "\n";
        out += "check: " + f.check + "\n";
        out += "lhs: " + f.lhs + "\n";
        out += "rhs: " + f.rhs + "\n";
        if (!f.input.empty()) {
            out += "input:\n";
            std::size_t start = 0;
            while (start < f.input.size()) {
                std::size_t nl = f.input.find('\n', start);
                if (nl == std::string::npos) nl = f.input.size();
                out += "  " + f.input.substr(start, nl - start) + "\n";
                start = nl + 1;
            }
        }
    }
    out += std::string("result: ") + (report.pass() ? "PASS" : "FAIL") + "\n";
    return out;
}

std::string render_report_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["identity"] = report.identity;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.params) params[k] = v;
    j["params"] = params;
    j["trials"] = report.trials_run;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : report.failures) {
        nlohmann::ordered_json jf;
        jf["trial"] = f.trial;
        jf["check"] = f.check;
        jf["lhs"] = f.lhs;
        jf["rhs"] = f.rhs;
        jf["input"] = f.input;
        failures.push_back(jf);
    }
    j["failures"] = failures;
    j["result"] = report.pass() ? "PASS" : "FAIL";
    return j.dump(2) + "\n";
}

}  // namespace multipol
