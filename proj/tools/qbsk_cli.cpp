// Command-line front end for the operator experiments. Subcommands:
//   converge | moments | audit | bounds | voronovskaja
// Configuration comes from a flat JSON key/value file (--config) and/or
// flags; flags override file values. All output is deterministic CSV.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbsk/experiments.hpp"

namespace {

using nlohmann::json;

std::vector<int> parse_r_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoi(item));
    return out;
}

// shifts are given in the order mu2, mu1, nu1, nu2
qbsk::ShiftParams parse_shifts(const std::vector<double>& v) {
    if (v.size() != 4) throw qbsk::ConfigError("shifts", "expected 4 values");
    return {v[1], v[2], v[0], v[3]};
}

void apply_q_value(qbsk::RunConfig& cfg, const std::string& text) {
    if (text == "schedule") {
        cfg.q_mode = qbsk::QMode::schedule;
        return;
    }
    cfg.q_mode = qbsk::QMode::fixed;
    try {
        cfg.q_fixed = std::stod(text);
    } catch (const std::exception&) {
        throw qbsk::ConfigError("q", "expected a number or 'schedule'");
    }
}

void load_config_file(qbsk::RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qbsk::ConfigError("config", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw qbsk::ConfigError("config", e.what());
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "subcommand")
            cfg.subcommand = value.get<std::string>();
        else if (key == "r_list")
            cfg.r_list = value.get<std::vector<int>>();
        else if (key == "q")
            apply_q_value(cfg, value.is_number()
                                   ? qbsk::CsvTable::num(value.get<double>())
                                   : value.get<std::string>());
        else if (key == "shifts")
            cfg.shifts = parse_shifts(value.get<std::vector<double>>());
        else if (key == "mode") {
            std::string m = value.get<std::string>();
            if (m != "jackson" && m != "riemann")
                throw qbsk::ConfigError("mode", "expected jackson or riemann");
            cfg.mode = m == "jackson" ? qbsk::IntegralMode::jackson
                                      : qbsk::IntegralMode::riemann;
        } else if (key == "function")
            cfg.function = value.get<std::string>();
        else if (key == "expr")
            cfg.expr = value.get<std::string>();
        else if (key == "p")
            cfg.p = value.get<double>();
        else if (key == "grid_n")
            cfg.grid_n = value.get<int>();
        else if (key == "out")
            cfg.out = value.get<std::string>();
        else if (key == "seed")
            cfg.seed = value.get<std::uint64_t>();
        else
            throw qbsk::ConfigError("config", "unknown key '" + key + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-Bernstein-Stancu-Kantorovich operator experiments"};
    app.require_subcommand(1);

    std::string config_path, r_text, q_text, mode_text, function, expr, out;
    std::vector<double> shifts_flag;
    double p = -1.0;
    int grid_n = -1;
    long long seed = -1;

    for (const char* name :
         {"converge", "moments", "audit", "bounds", "voronovskaja"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--r", r_text, "comma-separated degree list");
        sub->add_option("--q", q_text, "fixed q in (0,1] or 'schedule'");
        sub->add_option("--shifts", shifts_flag, "mu2,mu1,nu1,nu2")->expected(4)->delimiter(',');
        sub->add_option("--mode", mode_text, "jackson|riemann");
        sub->add_option("--function", function, "registry function name");
        sub->add_option("--expr", expr, "expression in t (overrides --function)");
        sub->add_option("--p", p, "L_p exponent");
        sub->add_option("--grid", grid_n, "grid size");
        sub->add_option("--out", out, "output path or '-' for stdout");
        sub->add_option("--seed", seed, "seed for randomized audits");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        qbsk::RunConfig cfg;
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (!r_text.empty()) cfg.r_list = parse_r_list(r_text);
        if (!q_text.empty()) apply_q_value(cfg, q_text);
        if (!shifts_flag.empty()) cfg.shifts = parse_shifts(shifts_flag);
        if (!mode_text.empty()) {
            if (mode_text != "jackson" && mode_text != "riemann")
                throw qbsk::ConfigError("mode", "expected jackson or riemann");
            cfg.mode = mode_text == "jackson" ? qbsk::IntegralMode::jackson
                                              : qbsk::IntegralMode::riemann;
        }
        if (!function.empty()) cfg.function = function;
        if (!expr.empty()) cfg.expr = expr;
        if (p >= 0.0) cfg.p = p;
        if (grid_n >= 0) cfg.grid_n = grid_n;
        if (!out.empty()) cfg.out = out;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.validate();

        bool violation = false;
        qbsk::CsvTable table;
        if (cfg.subcommand == "converge")
            table = qbsk::cmd_converge(cfg);
        else if (cfg.subcommand == "moments")
            table = qbsk::cmd_moments(cfg);
        else if (cfg.subcommand == "audit")
            table = qbsk::cmd_audit(cfg);
        else if (cfg.subcommand == "bounds")
            table = qbsk::cmd_bounds(cfg, &violation);
        else
            table = qbsk::cmd_voronovskaja(cfg);
        qbsk::emit_csv(table, cfg.out);
        return violation ? 2 : 0;
    } catch (const qbsk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
