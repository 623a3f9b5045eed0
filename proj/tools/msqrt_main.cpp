#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "msqrt/baselines.hpp"
#include "msqrt/io.hpp"
#include "msqrt/sqrt_cr.hpp"
#include "msqrt/sqrt_cr_shifted.hpp"
#include "msqrt/sqrt_in.hpp"
#include "msqrt/testgen.hpp"
#include "msqrt/xp.hpp"

namespace {

using namespace msqrt;

int classify_exit(errc c) {
    switch (c) {
        case errc::parse_error:
        case errc::io_error:
        case errc::bad_option:
        case errc::invalid_triplet:
        case errc::not_z_matrix:
        case errc::u_not_positive:
        case errc::v_negative:
        case errc::no_triplet:
        case errc::dimension_mismatch:
        case errc::shift_requires_singular:
        case errc::shift_requires_irreducible:
            return 1;
        default:
            return 2;
    }
}

int report(const Error& e) {
    std::cerr << "ERROR " << errc_name(e.code()) << " " << e.what() << "\n";
    return classify_exit(e.code());
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.7g", x);
    return buf;
}

TripletRep load_input(const std::string& path, const std::string& upath) {
    if (looks_like_triplet_file(path)) {
        if (!upath.empty())
            fail(errc::bad_option, "--u only applies to matrix-format inputs");
        return read_triplet(path);
    }
    DenseMatrix a = read_matrix_market(path);
    DenseVector u;
    if (!upath.empty()) {
        u = read_vector(upath);
    } else {
        u.assign(a.rows(), 1.0);
    }
    return from_full(a, u);
}

struct AlgRun {
    SqrtResult res;
    bool fell_back = false;
};

AlgRun run_alg(const std::string& alg, const TripletRep& t, const SqrtOptions& opts,
               double sigma_cap) {
    AlgRun r;
    if (alg == "cr") {
        r.res = cr_sqrt(t, opts);
    } else if (alg == "in") {
        r.res = in_sqrt(t, opts);
    } else if (alg == "cr-shifted") {
        ShiftedCrOptions so;
        so.gamma = opts.gamma;
        so.tol = opts.tol;
        so.max_iter = opts.max_iter;
        so.sigma_cap = sigma_cap;
        try {
            r.res = shifted_cr_sqrt(t, so);
        } catch (const Error& e) {
            if (e.code() != errc::shift_no_column) throw;
            std::cerr << "WARNING no usable shift column (" << e.what()
                      << "); falling back to --alg cr\n";
            r.res = cr_sqrt(t, opts);
            r.fell_back = true;
        }
    } else if (alg == "cr-std") {
        r.res = cr_sqrt_standard(reconstruct(t), opts);
    } else {
        fail(errc::bad_option, "unknown algorithm '" + alg + "'");
    }
    return r;
}

int cmd_sqrt(const std::string& input, const std::string& upath, const std::string& alg,
             const SqrtOptions& opts, double sigma_cap, const std::string& out,
             const std::string& out_triplet) {
    TripletRep t = load_input(input, upath);
    auto t0 = std::chrono::steady_clock::now();
    AlgRun run = run_alg(alg, t, opts, sigma_cap);
    auto t1 = std::chrono::steady_clock::now();
    const SqrtResult& res = run.res;

    if (res.linear_phase && res.status != SqrtStatus::converged)
        std::cerr << "WARNING contraction turned linear; for a singular irreducible input "
                     "--alg cr-shifted restores fast convergence\n";

    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cout << "alg=" << (run.fell_back ? alg + "(cr)" : alg) << " n=" << t.n
              << " iters=" << res.iterations << " status=" << status_name(res.status)
              << " scale=" << fmt(res.scale)
              << " defect=" << fmt(res.residual_trace.empty() ? 0.0 : res.residual_trace.back())
              << " time=" << fmt(secs) << "s";
    if (alg == "cr-shifted" && !run.fell_back)
        std::cout << " sigma=" << fmt(res.sigma) << " column=" << res.shift_column + 1;
    std::cout << "\n";

    if (!out.empty()) write_matrix_market(out, res.X);
    if (!out_triplet.empty()) {
        if (!res.triplet)
            fail(errc::no_triplet, "algorithm '" + alg + "' does not certify a triplet");
        write_triplet(out_triplet, *res.triplet);
    }
    if (res.status != SqrtStatus::converged) {
        std::cerr << "ERROR " << errc_name(errc::no_convergence) << " stopped after "
                  << res.iterations << " steps with status " << status_name(res.status) << "\n";
        return 2;
    }
    return 0;
}

int cmd_gen(const TestSpec& spec, const std::string& out) {
    TripletRep t = generate(spec);
    if (out.empty()) {
        write_triplet(std::cout, t);
    } else {
        write_triplet(out, t);
        std::cout << "wrote " << out << " (n=" << t.n << ")\n";
    }
    return 0;
}

int cmd_check(const std::string& input) {
    TripletRep t = read_triplet(input);
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            if (t.P(i, j) != 0.0) ++nnz;
    DenseVector d = implied_diag(t);
    double dmin = d.empty() ? 0.0 : d[0], dmax = dmin;
    for (double x : d) {
        dmin = std::min(dmin, x);
        dmax = std::max(dmax, x);
    }
    std::cout << "ok n=" << t.n << " nnz=" << nnz
              << " singular=" << (is_singular_rep(t) ? "yes" : "no") << " diag=[" << fmt(dmin)
              << "," << fmt(dmax) << "]\n";
    return 0;
}

struct CompareCase {
    TestSpec spec;
    std::string label_family;
    double label_eps = 0.0;
};

int cmd_compare(const std::vector<std::string>& families, const std::vector<std::size_t>& sizes,
                const std::vector<double>& epss, const std::vector<std::string>& algs,
                const std::vector<std::uint64_t>& seeds, const SqrtOptions& opts,
                const std::string& out, const std::string& dump_dir, bool omit_time) {
    std::vector<CompareCase> cases;
    for (const std::string& fam : families) {
        for (std::size_t n : sizes) {
            if (fam == "2") {
                for (double e : epss) {
                    CompareCase c;
                    c.spec = TestSpec{"2", n, e, 1, true, 0.5};
                    c.label_family = fam;
                    c.label_eps = e;
                    cases.push_back(c);
                }
            } else if (fam == "random") {
                for (std::uint64_t s : seeds) {
                    CompareCase c;
                    c.spec = TestSpec{"random", n, 0.0, s, false, 0.5};
                    c.label_family = fam + std::to_string(s);
                    cases.push_back(c);
                }
            } else {
                CompareCase c;
                c.spec = TestSpec{fam, n, 0.0, 1, true, 0.5};
                c.label_family = fam;
                cases.push_back(c);
            }
        }
    }

    std::ostringstream csv;
    csv << "family,n,eps,alg,max_err,iters,time_s,status\n";
    if (!dump_dir.empty()) std::filesystem::create_directories(dump_dir);

    for (const CompareCase& c : cases) {
        TripletRep t = generate(c.spec);
        bool singular = is_singular_rep(t);
        xp::XpMatrix ref = xp::xp_sqrtm_reference(t, singular);
        for (const std::string& alg : algs) {
            std::string status;
            std::string err = "nan";
            std::size_t iters = 0;
            auto t0 = std::chrono::steady_clock::now();
            try {
                AlgRun run = run_alg(alg, t, opts, 15.0 / 16.0);
                iters = run.res.iterations;
                status = status_name(run.res.status);
                if (run.fell_back) status += "(fallback)";
                xp::CompError ce = xp::comp_error(run.res.X, ref);
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.6e", ce.max_rel);
                err = buf;
                if (!dump_dir.empty()) {
                    std::ostringstream fn;
                    fn << dump_dir << "/f" << c.label_family << "_n" << c.spec.n;
                    if (c.spec.family == "2") fn << "_eps" << fmt(c.label_eps);
                    fn << "_" << alg << ".mtx";
                    write_matrix_market(fn.str(), ce.entrywise);
                }
            } catch (const Error& e) {
                status = errc_name(e.code());
            }
            auto t1 = std::chrono::steady_clock::now();
            double secs = omit_time ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
            char tbuf[40];
            std::snprintf(tbuf, sizeof(tbuf), "%.4f", secs);
            csv << c.label_family << "," << c.spec.n << "," << fmt(c.label_eps) << "," << alg
                << "," << err << "," << iters << "," << tbuf << "," << status << "\n";
        }
    }

    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream os(out);
        if (!os) fail(errc::io_error, "cannot open '" + out + "' for writing");
        os << csv.str();
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Componentwise-accurate principal square roots of M-matrices"};
    app.require_subcommand(1);

    // sqrt
    std::string input, upath, alg = "cr", out, out_triplet;
    SqrtOptions opts;
    double sigma_cap = 15.0 / 16.0;
    auto* c_sqrt = app.add_subcommand("sqrt", "Compute the principal square root");
    c_sqrt->add_option("--input", input, "Triplet or MatrixMarket file")->required();
    c_sqrt->add_option("--u", upath, "Positive vector file for matrix-format inputs");
    c_sqrt->add_option("--alg", alg, "cr | cr-shifted | in | cr-std")
        ->check(CLI::IsMember({"cr", "cr-shifted", "in", "cr-std"}));
    c_sqrt->add_option("--gamma", opts.gamma, "Scaling factor, >= 1");
    c_sqrt->add_option("--tol", opts.tol, "Relative stopping tolerance");
    c_sqrt->add_option("--max-iter", opts.max_iter, "Iteration budget");
    c_sqrt->add_option("--sigma-cap", sigma_cap, "Shift cap in (0,1), cr-shifted only");
    c_sqrt->add_option("--out", out, "Write X in MatrixMarket format");
    c_sqrt->add_option("--out-triplet", out_triplet, "Write the triplet of X");

    // gen
    TestSpec spec;
    std::string gen_out;
    bool nonsingular = false;
    auto* c_gen = app.add_subcommand("gen", "Generate a test matrix");
    c_gen->add_option("--family", spec.family, "1 | 2 | 3 | random")->required();
    c_gen->add_option("--n", spec.n, "Order")->required();
    c_gen->add_option("--eps", spec.eps_unbalance, "Unbalance parameter (family 2)");
    c_gen->add_option("--seed", spec.seed, "Seed (family random)");
    c_gen->add_flag("--nonsingular", nonsingular, "Draw v > 0 (family random)");
    c_gen->add_option("--density", spec.density, "Off-diagonal fill (family random)");
    c_gen->add_option("--out", gen_out, "Output triplet file (default stdout)");

    // check
    std::string check_input;
    auto* c_check = app.add_subcommand("check", "Validate a triplet file");
    c_check->add_option("--input", check_input, "Triplet file")->required();

    // compare
    std::vector<std::string> families{"1", "2", "3"};
    std::vector<std::size_t> sizes{10, 50, 100};
    std::vector<double> epss{1e-2, 1e-5, 1e-8, 1e-11, 1e-14};
    std::vector<std::string> algs{"cr", "in", "cr-shifted", "cr-std"};
    std::vector<std::uint64_t> seeds{1};
    std::string cmp_out, dump_dir;
    bool omit_time = false;
    SqrtOptions cmp_opts;
    auto* c_cmp = app.add_subcommand("compare", "Run algorithms against the extended-precision reference");
    c_cmp->add_option("--families", families, "Any of 1 2 3 random")->delimiter(',');
    c_cmp->add_option("--sizes", sizes, "Orders to run")->delimiter(',');
    c_cmp->add_option("--eps", epss, "Unbalance values for family 2")->delimiter(',');
    c_cmp->add_option("--algs", algs, "Algorithms to run")->delimiter(',');
    c_cmp->add_option("--seeds", seeds, "Seeds for family random")->delimiter(',');
    c_cmp->add_option("--gamma", cmp_opts.gamma, "Scaling factor");
    c_cmp->add_option("--max-iter", cmp_opts.max_iter, "Iteration budget");
    c_cmp->add_option("--out", cmp_out, "CSV output path (default stdout)");
    c_cmp->add_option("--dump-errors", dump_dir, "Directory for entrywise error matrices");
    c_cmp->add_flag("--omit-time", omit_time, "Write 0 in the time column (reproducible output)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sqrt->parsed()) return cmd_sqrt(input, upath, alg, opts, sigma_cap, out, out_triplet);
        if (c_gen->parsed()) {
            if (nonsingular) spec.singular = false;
            return cmd_gen(spec, gen_out);
        }
        if (c_check->parsed()) return cmd_check(check_input);
        if (c_cmp->parsed())
            return cmd_compare(families, sizes, epss, algs, seeds, cmp_opts, cmp_out, dump_dir,
                               omit_time);
    } catch (const msqrt::Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "ERROR E_INTERNAL " << e.what() << "\n";
        return 2;
    }
    return 0;
}
