// markoff: command-line front door for the Markoff graph spectra library.
//
// Subcommands: surface, spectrum, moments, fixpoints, rot, discrepancy,
// cayley, verify.  File outputs land under --out with a manifest.json
// naming every artifact and the configuration that produced it.
//
// Exit codes: 0 success, 1 invariant/bound violation (structured JSON on
// stderr), 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "markoff/cayley.hpp"
#include "markoff/discrepancy.hpp"
#include "markoff/fixed_points.hpp"
#include "markoff/spectral.hpp"
#include "markoff/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string p_spec = "13";
    std::string out = "out";
    std::string format = "csv";
    unsigned threads = 0;
    uint64_t seed = 12345;
    std::size_t L = 6;
    unsigned m = 12;
    std::size_t bins = 60;
    std::size_t samples = 100;
    std::size_t rot_n = 12;
    uint64_t k = 0;
    std::size_t dense_cap = markoff::kDefaultDenseCap;
    bool quick = false;
};

// --p accepts a single prime "83" or an inclusive range "5:199"
std::vector<uint64_t> parse_primes(const std::string& arg) {
    auto colon = arg.find(':');
    if (colon == std::string::npos) {
        uint64_t p = std::stoull(arg);
        if (!markoff::is_prime(p))
            throw markoff::UsageError("--p " + arg + " is not prime");
        return {p};
    }
    uint64_t lo = std::stoull(arg.substr(0, colon));
    uint64_t hi = std::stoull(arg.substr(colon + 1));
    auto ps = markoff::primes_in(lo, hi);
    if (ps.empty()) throw markoff::UsageError("no primes in range " + arg);
    return ps;
}

class Manifest {
public:
    Manifest(const Options& opt, const std::string& command) : dir_(opt.out) {
        fs::create_directories(dir_);
        doc_["command"] = command;
        doc_["config"] = {{"p", opt.p_spec},     {"format", opt.format}, {"threads", markoff::thread_count()},
                          {"seed", opt.seed},    {"L", opt.L},           {"m", opt.m},
                          {"bins", opt.bins},    {"samples", opt.samples}, {"k", opt.k}};
        doc_["artifacts"] = json::array();
    }

    std::ofstream create(const std::string& name) {
        doc_["artifacts"].push_back({{"name", name}, {"path", (dir_ / name).string()}});
        return std::ofstream(dir_ / name);
    }

    ~Manifest() {
        std::ofstream os(dir_ / "manifest.json");
        os << doc_.dump(2) << "\n";
    }

private:
    fs::path dir_;
    json doc_;
};

int cmd_surface(const Options& opt) {
    Manifest manifest(opt, "surface");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, opt.k);
        std::string tag = "p" + std::to_string(p);
        {
            auto os = manifest.create("surface_" + tag + ".csv");
            markoff::write_surface_csv(idx, os);
        }
        json stats;
        stats["p"] = p;
        stats["k"] = opt.k;
        stats["vertex_count"] = idx.size();
        if (opt.k % p == 0 && idx.size() > 0) {
            markoff::MarkoffGraph g = markoff::build_graph(idx);
            {
                auto os = manifest.create("edges_" + tag + ".csv");
                markoff::write_edges_csv(g, os);
            }
            markoff::GraphStats s = markoff::graph_stats(idx, g);
            stats["loop_count"] = s.loop_count;
            stats["triangle_exists"] = s.triangle_exists;
            stats["component_sizes"] = s.component_sizes;
        }
        std::cout << stats.dump() << "\n";
    }
    return 0;
}

int cmd_spectrum(const Options& opt) {
    Manifest manifest(opt, "spectrum");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, 0);
        markoff::Spectrum s = markoff::spectrum(markoff::build_graph(idx), p, opt.dense_cap);
        std::string tag = "p" + std::to_string(p);
        {
            auto os = manifest.create("spectrum_" + tag + ".csv");
            markoff::write_spectrum_csv(s, os);
        }
        {
            auto os = manifest.create("histogram_" + tag + ".csv");
            markoff::write_histogram_csv(markoff::histogram(s, opt.bins), os);
        }
        auto m3 = markoff::multiplicity_of_three(s);
        json summary = {{"p", p},
                        {"vertices", s.size()},
                        {"lambda_min", s.eigenvalues.front()},
                        {"lambda_max", s.eigenvalues.back()},
                        {"multiplicity_of_3", m3.count},
                        {"spectral_gap_at_3", m3.gap},
                        {"exceptional_count", markoff::exceptional_count(s)}};
        std::cout << summary.dump() << "\n";
    }
    return 0;
}

int cmd_moments(const Options& opt) {
    Manifest manifest(opt, "moments");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, 0);
        markoff::Spectrum s = markoff::spectrum(markoff::build_graph(idx), p, opt.dense_cap);
        std::string tag = "p" + std::to_string(p);

        std::vector<markoff::MomentRow> eig_rows;
        for (unsigned L = 0; L <= opt.L; ++L) eig_rows.push_back(markoff::moment_row(s, L));
        {
            auto os = manifest.create("moments_" + tag + ".csv");
            markoff::write_moments_csv(eig_rows, os);
        }

        // same table through the exact word-sum route
        auto sums = markoff::word_fix_sums(idx, opt.L);
        std::vector<markoff::MomentRow> word_rows;
        for (unsigned L = 0; L <= opt.L; ++L) {
            markoff::MomentRow r;
            r.L = L;
            r.empirical = double(markoff::trace_from_sums(L, sums)) / double(idx.size());
            r.km = double(markoff::km_moment(L));
            r.abs_error = std::abs(r.empirical - r.km);
            r.paper_bound = std::pow(2.0, 17.0 * L) / double(p);
            word_rows.push_back(r);
        }
        {
            auto os = manifest.create("moments_words_" + tag + ".csv");
            markoff::write_moments_csv(word_rows, os);
        }

        double worst = 0;
        for (unsigned L = 0; L <= opt.L; ++L)
            worst = std::max(worst, std::abs(eig_rows[L].empirical - word_rows[L].empirical));
        json summary = {{"p", p}, {"L_max", opt.L}, {"max_route_gap", worst}};
        std::cout << summary.dump() << "\n";
    }
    return 0;
}

int cmd_fixpoints(const Options& opt) {
    Manifest manifest(opt, "fixpoints");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, 0);
        auto os = manifest.create("fixpoints_p" + std::to_string(p) + ".jsonl");
        std::size_t words = 0;
        for (std::size_t L = 1; L <= opt.L; ++L) {
            for (const markoff::Word& w : markoff::enumerate_reduced_words(L)) {
                markoff::FixReport r = markoff::verify_bounds(w, idx);
                os << markoff::fix_report_json(r).dump() << "\n";
                ++words;
            }
        }
        std::cout << json{{"p", p}, {"words", words}, {"L_max", opt.L}}.dump() << "\n";
    }
    return 0;
}

int cmd_rot(const Options& opt) {
    Manifest manifest(opt, "rot");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, 0);
        auto os = manifest.create("rot_p" + std::to_string(p) + ".csv");
        os << "n,scan,oracle,bound_2np\n";
        for (uint64_t n = 1; n <= opt.rot_n; ++n) {
            std::size_t scan = markoff::rot_fix_count_scan(n, idx);
            std::size_t oracle = markoff::rot_fix_count_oracle(n, idx);
            os << n << "," << scan << "," << oracle << "," << 2 * n * p << "\n";
            if (scan != oracle)
                throw markoff::DisagreementError("rot oracle mismatch at p=" + std::to_string(p) +
                                                 " n=" + std::to_string(n));
        }
        std::cout << json{{"p", p}, {"n_max", opt.rot_n}, {"agree", true}}.dump() << "\n";
    }
    return 0;
}

int cmd_discrepancy(const Options& opt) {
    Manifest manifest(opt, "discrepancy");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::SurfaceIndex idx = markoff::enumerate_surface(ctx, 0);
        markoff::Spectrum s = markoff::spectrum(markoff::build_graph(idx), p, opt.dense_cap);
        std::vector<markoff::DiscrepancyReport> rows;
        double sup = 0;
        for (auto [lo, hi] : markoff::dyadic_intervals(20)) {
            rows.push_back(markoff::interval_discrepancy(s, lo, hi, opt.m));
            sup = std::max(sup, rows.back().discrepancy());
        }
        std::string tag = "p" + std::to_string(p);
        if (opt.format == "json") {
            auto os = manifest.create("discrepancy_" + tag + ".json");
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"p", r.p},
                               {"interval_lo", r.lambda_lo},
                               {"interval_hi", r.lambda_hi},
                               {"m", r.m},
                               {"mu_p", r.mu_p_mass},
                               {"km", r.km_mass},
                               {"lower", r.lower},
                               {"upper", r.upper}});
            os << arr.dump(2) << "\n";
        } else {
            auto os = manifest.create("discrepancy_" + tag + ".csv");
            markoff::write_discrepancy_csv(rows, os);
        }
        std::cout << json{{"p", p}, {"m", opt.m}, {"sup_discrepancy", sup}}.dump() << "\n";
    }
    return 0;
}

int cmd_cayley(const Options& opt) {
    Manifest manifest(opt, "cayley");
    for (uint64_t p : parse_primes(opt.p_spec)) {
        markoff::PrimeContext ctx(p);
        markoff::CayleySummary s = markoff::verify_free_product(ctx, opt.L, opt.samples, opt.seed);
        {
            auto os = manifest.create("cayley_p" + std::to_string(p) + ".json");
            os << markoff::cayley_summary_json(s).dump(2) << "\n";
        }
        std::cout << markoff::cayley_summary_json(s).dump() << "\n";
        if (s.witnesses_found != s.words_checked || !s.all_matched)
            throw markoff::DisagreementError("free-product verification failed at p=" +
                                             std::to_string(p));
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    markoff::AcceptanceSuite suite(opt.quick);
    return markoff::print_acceptance(suite.run(), std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markoff graph mod p: spectra, fixed points, and discrepancy"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--threads", opt.threads, "worker threads (default: logical cores)");

    auto add_common = [&](CLI::App* sub, bool wants_out = true) {
        sub->add_option("--p", opt.p_spec, "prime or inclusive range lo:hi");
        if (wants_out) {
            sub->add_option("--out", opt.out, "output directory");
            sub->add_option("--format", opt.format, "csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
        sub->add_option("--seed", opt.seed, "seed for sampled checks");
    };

    CLI::App* surface = app.add_subcommand("surface", "enumerate a level set and its graph stats");
    add_common(surface);
    surface->add_option("--k", opt.k, "level set constant (default 0)");

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues and histogram");
    add_common(spectrum);
    spectrum->add_option("--bins", opt.bins, "histogram bin count");
    spectrum->add_option("--cap", opt.dense_cap, "dense eigensolve vertex cap");

    CLI::App* moments = app.add_subcommand("moments", "empirical vs kesten-mckay moment table");
    add_common(moments);
    moments->add_option("--L", opt.L, "largest moment");
    moments->add_option("--cap", opt.dense_cap, "dense eigensolve vertex cap");

    CLI::App* fixpoints = app.add_subcommand("fixpoints", "fixed-point census with bound reports");
    add_common(fixpoints);
    fixpoints->add_option("--L", opt.L, "maximum word length");

    CLI::App* rot = app.add_subcommand("rot", "conic oracle vs direct scan for rot powers");
    add_common(rot);
    rot->add_option("--n", opt.rot_n, "largest power of rot");

    CLI::App* discrepancy = app.add_subcommand("discrepancy", "interval discrepancy reports");
    add_common(discrepancy);
    discrepancy->add_option("--m", opt.m, "selberg polynomial degree")->check(CLI::Range(1, 40));
    discrepancy->add_option("--cap", opt.dense_cap, "dense eigensolve vertex cap");

    CLI::App* cayley = app.add_subcommand("cayley", "free-product verification on the cayley cubic");
    add_common(cayley);
    cayley->add_option("--L", opt.L, "maximum word length");
    cayley->add_option("--samples", opt.samples, "samples per word");

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_flag("--quick", opt.quick, "skip dense eigensolves at p >= 53");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (opt.threads > 0) markoff::set_thread_count(opt.threads);

    try {
        if (surface->parsed()) return cmd_surface(opt);
        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (moments->parsed()) return cmd_moments(opt);
        if (fixpoints->parsed()) return cmd_fixpoints(opt);
        if (rot->parsed()) return cmd_rot(opt);
        if (discrepancy->parsed()) return cmd_discrepancy(opt);
        if (cayley->parsed()) return cmd_cayley(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const markoff::UsageError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const markoff::TooLargeError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const markoff::Error& e) {
        std::cerr << nlohmann::json{{"error", "violation"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
