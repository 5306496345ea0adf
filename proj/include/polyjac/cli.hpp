#ifndef POLYJAC_CLI_HPP
#define POLYJAC_CLI_HPP

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyjac/arith.hpp"
#include "polyjac/asymptotics.hpp"
#include "polyjac/construction.hpp"
#include "polyjac/factorization.hpp"
#include "polyjac/group_actions.hpp"
#include "polyjac/jacobsthal.hpp"
#include "polyjac/polynomials.hpp"

namespace polyjac::cli {

using nlohmann::json;

namespace clidetail {

inline std::vector<uint64_t> parse_u64_list(const std::string& text, const char* what) {
    std::vector<uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoull(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what), "bad entry '" + tok + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what), "empty list");
    return out;
}

// "c0,c1,...^k;c0,c1;..." -> factor entries
inline std::vector<FactorEntry> parse_factors(const std::string& text) {
    std::vector<FactorEntry> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ';')) {
        if (piece.empty()) continue;
        uint32_t mult = 1;
        std::string coeffs = piece;
        if (const auto caret = piece.find('^'); caret != std::string::npos) {
            coeffs = piece.substr(0, caret);
            mult = static_cast<uint32_t>(std::stoul(piece.substr(caret + 1)));
        }
        out.push_back({IntPolynomial::parse(coeffs), mult});
    }
    if (out.empty()) throw error("factor list is empty");
    return out;
}

// group file: "degree N" then "gen ..." and "subgen ..." image lists
inline ActionInstance parse_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open group file " + path);
    uint32_t degree = 0;
    std::vector<Permutation> gens, subgens;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "degree") {
            if (!(ls >> degree) || degree == 0)
                throw error("group file line " + std::to_string(lineno) + ": bad degree");
        } else if (head == "gen" || head == "subgen") {
            std::vector<uint32_t> img;
            uint32_t v;
            while (ls >> v) img.push_back(v);
            if (degree == 0 || img.size() != degree)
                throw error("group file line " + std::to_string(lineno) +
                            ": image list does not match the degree");
            (head == "gen" ? gens : subgens).emplace_back(std::move(img));
        } else {
            throw error("group file line " + std::to_string(lineno) + ": unknown directive '" +
                        head + "'");
        }
    }
    if (gens.empty()) throw error("group file has no generators");
    auto group = close_generators(gens, 100000);
    std::vector<Permutation> subgroup;
    if (subgens.empty()) subgroup.push_back(Permutation::identity(degree));
    else subgroup = close_generators(subgens, 100000);
    return make_instance(std::move(group), std::move(subgroup), path);
}

inline std::string render_text(const json& j, const std::string& prefix = "") {
    std::string out;
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            const std::string name = prefix.empty() ? key : prefix + "." + key;
            if (value.is_object() || (value.is_array() && !value.empty() && value[0].is_array()))
                out += render_text(value, name);
            else
                out += name + " = " + value.dump() + "\n";
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            out += prefix + "[" + std::to_string(i) + "] = " + j[i].dump() + "\n";
    } else {
        out += prefix + " = " + j.dump() + "\n";
    }
    return out;
}

struct OutputOptions {
    std::string format = "json";
    std::string out_path;
};

inline void add_output_flags(CLI::App* cmd, OutputOptions& opts, bool csv_allowed = false) {
    const std::string choices = csv_allowed ? "json|text|csv" : "json|text";
    cmd->add_option("--format", opts.format, "output format (" + choices + ")")
        ->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "text", "csv"}
                                          : std::vector<std::string>{"json", "text"}));
    cmd->add_option("--out", opts.out_path, "write the document to a file instead of stdout");
}

inline void emit(const OutputOptions& opts, const std::string& document, std::ostream& out) {
    if (opts.out_path.empty()) {
        out << document;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) throw error("cannot open output file " + opts.out_path);
    file << document;
}

inline void emit_json(const OutputOptions& opts, const json& j, std::ostream& out) {
    if (opts.format == "text") emit(opts, render_text(j), out);
    else emit(opts, j.dump(2) + "\n", out);
}

inline json rational_json(const Rational& r) { return r.str(); }

} // namespace clidetail

/// Dispatch a full argv (program name excluded). Returns the process exit
/// code: 0 success, 1 domain error, 2 usage error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using clidetail::OutputOptions;

    CLI::App app{"polynomial Jacobsthal toolkit"};
    app.name("polyjac");
    app.require_subcommand(1);

    // ---- exact ----
    auto* exact = app.add_subcommand("exact", "exhaustive j_f over the primes up to a bound");
    std::string exact_poly;
    uint64_t exact_upto = 0;
    uint64_t exact_budget = kDefaultPeriodBudget;
    unsigned exact_threads = 0;
    OutputOptions exact_out;
    exact->add_option("--poly", exact_poly, "ascending coefficients c0,c1,...")->required();
    exact->add_option("--primes-upto", exact_upto, "use all primes <= this bound")->required();
    exact->add_option("--budget", exact_budget, "largest allowed period");
    exact->add_option("--threads", exact_threads, "worker threads (default: POLYJAC_THREADS)");
    clidetail::add_output_flags(exact, exact_out);

    // ---- construct ----
    auto* construct = app.add_subcommand("construct", "three-step certified lower-bound witness");
    std::string construct_poly, construct_factors, construct_mode = "adaptive";
    ConstructionParams cparams;
    std::optional<double> construct_M;
    OutputOptions construct_out;
    construct->add_option("--poly", construct_poly, "ascending coefficients")->required();
    construct->add_option("--y", cparams.y, "prime bound y")->required();
    construct->add_option("--A", cparams.A, "z0 exponent");
    construct->add_option("--B", cparams.B, "target formula divisor");
    construct->add_option("--M", construct_M, "M(f) override for the reported formula");
    construct->add_option("--m-cap", cparams.m_cap, "adaptive scan bound");
    construct->add_option("--fallback-threshold", cparams.greedy_fallback_threshold,
                          "pure greedy below this y");
    construct->add_option("--mode", construct_mode, "adaptive|target")
        ->check(CLI::IsMember(std::vector<std::string>{"adaptive", "target"}));
    construct->add_option("--target-m", cparams.target_m, "target m (target mode)");
    construct->add_option("--factors", construct_factors,
                          "known factorization 'c0,c1^k;...' (needed above degree 8)");
    clidetail::add_output_flags(construct, construct_out);

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "check a certificate document");
    std::string verify_cert;
    OutputOptions verify_out;
    verify->add_option("--cert", verify_cert, "certificate file")->required();
    clidetail::add_output_flags(verify, verify_out);

    // ---- mp ----
    auto* mp = app.add_subcommand("mp", "maximal fiber of f over F_p");
    std::string mp_poly;
    uint64_t mp_p = 0;
    OutputOptions mp_out;
    mp->add_option("--poly", mp_poly, "ascending coefficients")->required();
    mp->add_option("--p", mp_p, "prime")->required();
    clidetail::add_output_flags(mp, mp_out);

    // ---- mp-sums ----
    auto* mp_sums = app.add_subcommand("mp-sums", "partial sums of M_p(f)/p");
    std::string mps_poly, mps_checkpoints;
    uint64_t mps_budget = kGenericMpBudget;
    unsigned mps_threads = 0;
    OutputOptions mps_out;
    mp_sums->add_option("--poly", mps_poly, "ascending coefficients")->required();
    mp_sums->add_option("--checkpoints", mps_checkpoints, "X values, comma separated")->required();
    mp_sums->add_option("--budget", mps_budget, "generic enumeration step budget");
    mp_sums->add_option("--threads", mps_threads, "worker threads");
    clidetail::add_output_flags(mp_sums, mps_out, /*csv_allowed=*/true);

    // ---- estimate-m ----
    auto* estimate = app.add_subcommand("estimate-m", "slope of the M_p sums in ln ln X");
    std::string est_poly;
    uint64_t est_x1 = 0, est_x2 = 0, est_budget = kGenericMpBudget;
    unsigned est_threads = 0;
    OutputOptions est_out;
    estimate->add_option("--poly", est_poly, "ascending coefficients")->required();
    estimate->add_option("--x1", est_x1, "window start")->required();
    estimate->add_option("--x2", est_x2, "window end")->required();
    estimate->add_option("--budget", est_budget, "generic enumeration step budget");
    estimate->add_option("--threads", est_threads, "worker threads");
    clidetail::add_output_flags(estimate, est_out);

    // ---- roots-sums ----
    auto* roots = app.add_subcommand("roots-sums", "partial sums of r_p(q)/p for irreducible q");
    std::string roots_poly, roots_checkpoints;
    unsigned roots_threads = 0;
    OutputOptions roots_out;
    roots->add_option("--poly", roots_poly, "ascending coefficients")->required();
    roots->add_option("--checkpoints", roots_checkpoints, "X values, comma separated")->required();
    roots->add_option("--threads", roots_threads, "worker threads");
    clidetail::add_output_flags(roots, roots_out, /*csv_allowed=*/true);

    // ---- smooth ----
    auto* smooth = app.add_subcommand("smooth", "Psi(x, z) smooth-number count");
    uint64_t smooth_x = 0, smooth_z = 0;
    OutputOptions smooth_out;
    smooth->add_option("--x", smooth_x, "upper bound")->required();
    smooth->add_option("--z", smooth_z, "smoothness bound")->required();
    clidetail::add_output_flags(smooth, smooth_out);

    // ---- group-m ----
    auto* group_m = app.add_subcommand("group-m", "exact m(G,H;X) of an action instance");
    std::string gm_instance, gm_file;
    OutputOptions gm_out;
    group_m->add_option("--instance", gm_instance, "built-in instance (aff:d, s4xc2-pairs)");
    group_m->add_option("--group-file", gm_file, "instance description file");
    clidetail::add_output_flags(group_m, gm_out);

    // ---- group-search ----
    auto* group_search = app.add_subcommand("group-search", "hunt for non-integral m(G,H;X)");
    uint32_t gs_degree = 0;
    std::size_t gs_cap = 0;
    OutputOptions gs_out;
    group_search->add_option("--degree", gs_degree, "degree of the action")->required();
    group_search->add_option("--max-order", gs_cap, "largest group order to close")->required();
    clidetail::add_output_flags(group_search, gs_out);

    // ---- factor ----
    auto* factor = app.add_subcommand("factor", "factorization profile over the rationals");
    std::string factor_poly, factor_factors;
    OutputOptions factor_out;
    factor->add_option("--poly", factor_poly, "ascending coefficients")->required();
    factor->add_option("--factors", factor_factors, "claimed factorization to validate");
    clidetail::add_output_flags(factor, factor_out);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*exact) {
            const IntPolynomial f = IntPolynomial::parse(exact_poly);
            const arith::PrimeTable table = arith::sieve_primes(exact_upto);
            const std::vector<uint64_t> primes(table.primes().begin(), table.primes().end());
            const JacobsthalResult r = exact_jf(f, primes, exact_budget, exact_threads);
            json j;
            j["value"] = r.infinite ? json("INFINITE") : json(r.value);
            j["witness_x"] = r.witness_x ? json(*r.witness_x) : json(nullptr);
            j["period"] = r.period;
            clidetail::emit_json(exact_out, j, out);
        } else if (*construct) {
            const IntPolynomial f = IntPolynomial::parse(construct_poly);
            cparams.m_value = construct_M;
            cparams.target_mode = construct_mode == "target";
            std::optional<FactorizationProfile> profile;
            if (!construct_factors.empty())
                profile = factor_profile_checked(f, clidetail::parse_factors(construct_factors));
            const SieveCertificate cert = construct_witness(f, cparams, profile);
            if (construct_out.format == "text") {
                json j;
                j["m"] = cert.m;
                j["y"] = cert.y;
                j["mode"] = cert.mode;
                j["fallback"] = cert.diagnostics.fallback;
                j["target_m_formula_value"] = cert.diagnostics.target_m_formula_value
                                                  ? json(*cert.diagnostics.target_m_formula_value)
                                                  : json(nullptr);
                clidetail::emit(construct_out, clidetail::render_text(j), out);
            } else {
                clidetail::emit(construct_out, serialize_certificate(cert), out);
            }
        } else if (*verify) {
            std::ifstream in(verify_cert);
            if (!in) throw error("cannot open certificate " + verify_cert);
            std::stringstream buffer;
            buffer << in.rdbuf();
            const SieveCertificate cert = parse_certificate(buffer.str());
            const VerifyReport report = verify_certificate(cert, cert.poly, cert.y);
            json j;
            j["valid"] = report.ok;
            j["m"] = cert.m;
            j["reasons"] = report.reasons;
            clidetail::emit_json(verify_out, j, out);
            return report.ok ? 0 : 1;
        } else if (*mp) {
            const IntPolynomial f = IntPolynomial::parse(mp_poly);
            const PreimageProfile profile = max_preimage(f, mp_p);
            json j;
            j["p"] = profile.prime;
            j["max_count"] = profile.max_count;
            j["argmax"] = profile.argmax_value ? json(*profile.argmax_value) : json(nullptr);
            clidetail::emit_json(mp_out, j, out);
        } else if (*mp_sums) {
            const IntPolynomial f = IntPolynomial::parse(mps_poly);
            const auto checkpoints = clidetail::parse_u64_list(mps_checkpoints, "--checkpoints");
            const PartialSumSeries series = mp_partial_sums(f, checkpoints, mps_budget, mps_threads);
            if (mps_out.format == "csv") {
                clidetail::emit(mps_out, series_to_csv(series), out);
            } else {
                json j;
                j["weight_kind"] = series.weight_kind;
                j["checkpoints"] = series.checkpoints;
                j["sums"] = series.sums;
                clidetail::emit_json(mps_out, j, out);
            }
        } else if (*estimate) {
            const IntPolynomial f = IntPolynomial::parse(est_poly);
            const MEstimate est = estimate_M(f, est_x1, est_x2, est_budget, est_threads);
            json j;
            j["slope"] = est.slope;
            j["intercept"] = est.intercept;
            j["window"] = {est.window_lo, est.window_hi};
            clidetail::emit_json(est_out, j, out);
        } else if (*roots) {
            const IntPolynomial q = IntPolynomial::parse(roots_poly);
            const auto checkpoints = clidetail::parse_u64_list(roots_checkpoints, "--checkpoints");
            const PartialSumSeries series = root_count_sums(q, checkpoints, roots_threads);
            if (roots_out.format == "csv") {
                clidetail::emit(roots_out, series_to_csv(series), out);
            } else {
                json j;
                j["weight_kind"] = series.weight_kind;
                j["checkpoints"] = series.checkpoints;
                j["sums"] = series.sums;
                clidetail::emit_json(roots_out, j, out);
            }
        } else if (*smooth) {
            json j;
            j["x"] = smooth_x;
            j["z"] = smooth_z;
            j["count"] = smooth_count(smooth_x, smooth_z);
            clidetail::emit_json(smooth_out, j, out);
        } else if (*group_m) {
            if (gm_instance.empty() == gm_file.empty())
                throw error("group-m needs exactly one of --instance or --group-file");
            const ActionInstance inst = gm_instance.empty()
                                            ? clidetail::parse_group_file(gm_file)
                                            : builtin_instance(gm_instance);
            json j;
            j["m"] = clidetail::rational_json(m_invariant(inst));
            clidetail::emit_json(gm_out, j, out);
        } else if (*group_search) {
            const SearchResult result = search_nonintegral(gs_degree, gs_cap);
            json hits = json::array();
            for (const auto& hit : result.hits) {
                json h;
                h["group"] = hit.instance.label;
                h["group_order"] = hit.instance.group.size();
                h["subgroup_order"] = hit.instance.subgroup.size();
                h["degree"] = hit.instance.degree;
                h["m"] = clidetail::rational_json(hit.m);
                hits.push_back(h);
            }
            json j;
            j["degree"] = gs_degree;
            j["max_order"] = gs_cap;
            j["partial"] = result.partial;
            j["hits"] = hits;
            clidetail::emit_json(gs_out, j, out);
        } else if (*factor) {
            const IntPolynomial f = IntPolynomial::parse(factor_poly);
            const FactorizationProfile profile =
                factor_factors.empty()
                    ? factor_profile(f)
                    : factor_profile_checked(f, clidetail::parse_factors(factor_factors));
            json factors = json::array();
            for (const auto& e : profile.factors) {
                json fe;
                fe["coefficients"] = e.poly.coefficients();
                fe["multiplicity"] = e.multiplicity;
                factors.push_back(fe);
            }
            json j;
            j["content"] = profile.content;
            j["linear_count"] = profile.linear_count;
            j["nonlinear_count"] = profile.nonlinear_count;
            j["factors"] = factors;
            clidetail::emit_json(factor_out, j, out);
        }
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace polyjac::cli

#endif
