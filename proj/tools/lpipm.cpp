#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "ipm/io.hpp"
#include "ipm/oracle.hpp"

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitInputError = 4;
constexpr int kExitInternalError = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ipm::ParseError("cannot open '" + path + "'", 0, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool looks_like_mps(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return false;
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == "mps";
}

ipm::GeneralLP<ipm::Rational> load_problem(const std::string& path) {
    std::string text = read_file(path);
    return looks_like_mps(path) ? ipm::parse_mps(text) : ipm::parse_lp(text);
}

int status_code(ipm::SolveStatus s) {
    switch (s) {
        case ipm::SolveStatus::optimal: return kExitOptimal;
        case ipm::SolveStatus::infeasible: return kExitInfeasible;
        case ipm::SolveStatus::unbounded: return kExitUnbounded;
    }
    return kExitInternalError;
}

const char* status_name(ipm::SolveStatus s) {
    switch (s) {
        case ipm::SolveStatus::optimal: return "optimal";
        case ipm::SolveStatus::infeasible: return "infeasible";
        case ipm::SolveStatus::unbounded: return "unbounded";
    }
    return "?";
}

struct SolveArgs {
    std::vector<std::string> files;
    std::string mode = "exact";
    std::string rule = "main";
    std::string mu_target;
    std::string trace_path;
    std::string certificate_path;
    std::uint64_t max_iters = 0;
    unsigned jobs = 1;
};

int solve_one(const SolveArgs& args, const std::string& file, std::ostream& out) {
    ipm::GeneralLP<ipm::Rational> lp = load_problem(file);

    if (args.mode == "float") {
        ipm::FloatOptions opts;
        opts.rule = args.rule == "alt" ? ipm::RuleKind::alternative : ipm::RuleKind::main;
        opts.record_trace = !args.trace_path.empty();
        opts.max_iterations = args.max_iters;
        if (!args.mu_target.empty()) opts.mu_target = std::stod(args.mu_target);
        ipm::FloatSolveResult res = ipm::solve_float(ipm::to_float(lp), opts);
        if (!args.trace_path.empty()) {
            std::ofstream tf(args.trace_path);
            ipm::write_trace(tf, res.trace);
        }
        out << file << ": approximate objective " << res.objective << " (gap " << res.gap
            << ", mu " << res.mu_final << ", " << res.iterations << " iterations)\n";
        out << "x =";
        for (std::size_t j = 0; j < res.x.size(); ++j) out << " " << res.x[j];
        out << "\n";
        if (res.artificial > res.gap)
            out << "warning: artificial variable " << res.artificial
                << " did not vanish; the problem may be infeasible\n";
        return kExitOptimal;
    }

    ipm::ExactOptions opts;
    opts.rule = args.rule == "alt" ? ipm::RuleKind::alternative : ipm::RuleKind::main;
    opts.record_trace = !args.trace_path.empty();
    opts.max_iterations = args.max_iters;
    if (!args.mu_target.empty())
        opts.mu_target = ipm::Rational::from_string(args.mu_target);

    ipm::ExactSolveResult res = ipm::solve(lp, opts);
    if (!args.trace_path.empty()) {
        std::ofstream tf(args.trace_path);
        ipm::write_trace(tf, res.trace);
    }
    if (!args.certificate_path.empty()) {
        std::ofstream cf(args.certificate_path);
        cf << ipm::certificate_to_json(res.certificate).dump(2) << "\n";
    }

    out << file << ": " << status_name(res.status) << " (" << res.iterations
        << " iterations)\n";
    if (res.status == ipm::SolveStatus::optimal) {
        out << "objective = " << res.objective->str() << "\n";
        out << "x =";
        for (std::size_t j = 0; j < res.x->size(); ++j) out << " " << (*res.x)[j].str();
        out << "\n";
    } else if (res.status == ipm::SolveStatus::unbounded) {
        out << "ray =";
        for (std::size_t j = 0; j < res.ray->size(); ++j) out << " " << (*res.ray)[j].str();
        out << "\n";
    }
    return status_code(res.status);
}

int run_solve(const SolveArgs& args) {
    if (args.files.size() == 1 || args.jobs <= 1) {
        int code = kExitOptimal;
        for (const auto& f : args.files) {
            std::ostringstream os;
            int c = solve_one(args, f, os);
            std::cout << os.str();
            if (args.files.size() == 1) code = c;
        }
        return code;
    }
    // Batch mode: independent files on a worker pool; per-file status lines,
    // overall success unless a file errors out.
    std::mutex mu;
    std::size_t next = 0;
    int worst = kExitOptimal;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= args.files.size()) return;
                i = next++;
            }
            std::ostringstream os;
            int code = kExitOptimal;
            try {
                solve_one(args, args.files[i], os);
            } catch (const std::exception& e) {
                os << args.files[i] << ": error: " << e.what() << "\n";
                code = kExitInternalError;
            }
            std::lock_guard<std::mutex> lock(mu);
            std::cout << os.str();
            if (code > worst) worst = code;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < args.jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return worst == kExitOptimal ? kExitOptimal : kExitInternalError;
}

int run_oracle(const std::string& file) {
    ipm::GeneralLP<ipm::Rational> lp = load_problem(file);
    ipm::StandardLP<ipm::Rational> p = ipm::to_standard_form(lp);
    ipm::OracleVerdict v = ipm::oracle_solve(p);
    switch (v.status) {
        case ipm::OracleStatus::infeasible:
            std::cout << "infeasible (no vertex)\n";
            return kExitInfeasible;
        case ipm::OracleStatus::unbounded: {
            std::cout << "unbounded\nray =";
            for (std::size_t j = 0; j < v.ray->size(); ++j)
                std::cout << " " << (*v.ray)[j].str();
            std::cout << "\n";
            return kExitUnbounded;
        }
        case ipm::OracleStatus::optimal:
            break;
    }
    ipm::Rational opt = *v.objective;
    if (lp.sense == ipm::ObjectiveSense::maximize) opt = -opt;
    std::cout << "optimal, objective = " << opt.str() << "\n";
    for (const auto& vx : v.vertices.vertices) {
        std::cout << (vx.objective == *v.objective ? "* " : "  ") << "vertex";
        for (std::size_t j = 0; j < vx.x.size(); ++j) std::cout << " " << vx.x[j].str();
        std::cout << "  objective " << vx.objective.str() << "\n";
    }
    return kExitOptimal;
}

int run_check(const std::string& file, const std::string& cert_path) {
    ipm::GeneralLP<ipm::Rational> lp = load_problem(file);
    ipm::StandardLP<ipm::Rational> p = ipm::to_standard_form(lp);
    nlohmann::json j = nlohmann::json::parse(read_file(cert_path));
    ipm::Certificate cert = ipm::certificate_from_json(j);
    ipm::SolveStatus st = ipm::verify_certificate(p, cert);
    std::cout << "certificate verifies: " << status_name(st) << "\n";
    return status_code(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact interior-point linear programming solver"};
    app.require_subcommand(1);

    SolveArgs sargs;
    CLI::App* solve = app.add_subcommand("solve", "Solve one or more LP files");
    solve->add_option("files", sargs.files, "LP or MPS files")->required();
    solve->add_option("--mode", sargs.mode, "exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    solve->add_option("--rule", sargs.rule, "step rule: main or alt")
        ->check(CLI::IsMember({"main", "alt"}));
    solve->add_option("--mu-target", sargs.mu_target, "barrier target (rational or decimal)");
    solve->add_option("--trace", sargs.trace_path, "write a JSONL trace");
    solve->add_option("--certificate", sargs.certificate_path, "write the certificate as JSON");
    solve->add_option("--max-iters", sargs.max_iters, "iteration cap");
    solve->add_option("--jobs", sargs.jobs, "worker threads for batch runs");

    std::string oracle_file;
    CLI::App* oracle = app.add_subcommand("oracle", "Enumerate vertices by brute force");
    oracle->add_option("file", oracle_file, "LP or MPS file")->required();

    std::string check_file, check_cert;
    CLI::App* check = app.add_subcommand("check", "Re-verify a certificate exactly");
    check->add_option("file", check_file, "LP or MPS file")->required();
    check->add_option("certificate", check_cert, "certificate JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (solve->parsed()) return run_solve(sargs);
        if (oracle->parsed()) return run_oracle(oracle_file);
        if (check->parsed()) return run_check(check_file, check_cert);
    } catch (const ipm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ipm::FreeVariableUnsupported& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ipm::Overflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ipm::OracleTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitInputError;
}
