// siq: command-line front end over the C API.
#include "siq/siq.h"

#include <CLI11.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitMatch = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitError = 2;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineDeleter {
    void operator()(siq_engine* e) const { siq_engine_free(e); }
};
struct ResultDeleter {
    void operator()(siq_result* r) const { siq_result_free(r); }
};
using EnginePtr = std::unique_ptr<siq_engine, EngineDeleter>;
using ResultPtr = std::unique_ptr<siq_result, ResultDeleter>;

void check(siq_engine* engine, siq_status status) {
    if (status == SIQ_OK) return;
    std::string msg = siq_status_name(status);
    if (engine && *siq_last_error(engine)) msg += ": " + std::string(siq_last_error(engine));
    throw Failure(msg);
}

std::string take(char* s) {
    std::string out(s ? s : "");
    siq_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("IoError: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) throw Failure("IoError: cannot write " + path);
}

struct Inputs {
    std::vector<std::string> detections;
    std::vector<std::string> stores;
    double min_conf = -1;
    siq_params params = siq_default_params();

    void add_to(CLI::App* cmd) {
        cmd->add_option("--detections", detections, "Detections file (JSON lines)")->check(CLI::ExistingFile);
        cmd->add_option("--store", stores, "Atomese store dump")->check(CLI::ExistingFile);
        cmd->add_option("--min-conf", min_conf, "Drop detections below this confidence")
            ->envname("SIQ_MIN_CONF")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--on-tau", params.on_tau, "ON: max gap between the boxes, as a fraction of the lower box height")
            ->envname("SIQ_ON_TAU");
        cmd->add_option("--on-overlap-min", params.on_overlap_min,
                        "ON: min horizontal overlap, as a fraction of the upper box width")
            ->envname("SIQ_ON_OVERLAP_MIN");
        cmd->add_option("--inside-slack", params.inside_slack, "INSIDE: pixels of tolerance per side")
            ->envname("SIQ_INSIDE_SLACK");
    }

    EnginePtr open(bool require_input = true) const {
        siq_engine* raw = nullptr;
        check(nullptr, siq_engine_new(&raw));
        EnginePtr engine(raw);
        check(engine.get(), siq_engine_set_params(engine.get(), &params));
        if (require_input && detections.empty() && stores.empty())
            throw Failure("InvalidArgument: --detections or --store is required");
        for (const std::string& path : stores) {
            std::string text = read_file(path);
            check(engine.get(), siq_engine_load_atomese(engine.get(), text.c_str(), nullptr));
        }
        for (const std::string& path : detections)
            check(engine.get(), siq_engine_ingest_file(engine.get(), path.c_str(), min_conf, nullptr));
        return engine;
    }
};

std::string summary(siq_engine* engine) {
    return "frames " + std::to_string(siq_engine_frame_count(engine)) + ", detections " +
           std::to_string(siq_engine_detection_count(engine)) + ", atoms " +
           std::to_string(siq_engine_atom_count(engine)) + "\n";
}

ResultPtr run_query(siq_engine* engine, const std::string& q, const std::string& atomese_file) {
    siq_result* raw = nullptr;
    if (!atomese_file.empty()) {
        std::string text = read_file(atomese_file);
        check(engine, siq_engine_query_atomese(engine, text.c_str(), &raw));
    } else {
        check(engine, siq_engine_query(engine, q.c_str(), &raw));
    }
    return ResultPtr(raw);
}

std::string render(const siq_result* result, bool json, bool explain) {
    char* s = nullptr;
    check(nullptr, json ? siq_result_json(result, &s) : siq_result_text(result, &s));
    std::string out = take(s);
    if (explain) {
        check(nullptr, siq_result_explain(result, &s));
        out += take(s);
    }
    return out;
}

std::string file_safe(const std::string& id) {
    std::string out;
    for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

std::string format_params(const siq_params& p) {
    std::ostringstream ss;
    ss << "on-tau=" << p.on_tau << " on-overlap-min=" << p.on_overlap_min << " inside-slack=" << p.inside_slack
       << "\n";
    return ss.str();
}

// `:params key=value ...`; without arguments prints the current values.
void repl_params(siq_engine* engine, std::istringstream& args) {
    siq_params p;
    check(engine, siq_engine_get_params(engine, &p));
    std::string kv;
    bool changed = false;
    while (args >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Failure("InvalidArgument: expected key=value, got " + kv);
        std::string key = kv.substr(0, eq);
        double value = 0;
        try {
            value = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw Failure("InvalidArgument: not a number: " + kv.substr(eq + 1));
        }
        if (key == "on-tau")
            p.on_tau = value;
        else if (key == "on-overlap-min")
            p.on_overlap_min = value;
        else if (key == "inside-slack")
            p.inside_slack = value;
        else
            throw Failure("InvalidArgument: unknown parameter " + key);
        changed = true;
    }
    if (changed) check(engine, siq_engine_set_params(engine, &p));
    std::cout << format_params(p);
}

int repl(siq_engine* engine, bool json, bool explain) {
    const bool interactive = isatty(STDIN_FILENO);
    std::string line;
    while (true) {
        if (interactive) std::cout << "siq> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        line = line.substr(first);
        try {
            if (line[0] == ':') {
                std::istringstream args(line);
                std::string cmd;
                args >> cmd;
                if (cmd == ":quit" || cmd == ":q") break;
                if (cmd == ":params") {
                    repl_params(engine, args);
                } else if (cmd == ":explain") {
                    std::string mode;
                    args >> mode;
                    if (mode == "on")
                        explain = true;
                    else if (mode == "off")
                        explain = false;
                    else
                        throw Failure("InvalidArgument: usage :explain on|off");
                } else {
                    throw Failure("InvalidArgument: unknown command " + cmd);
                }
                continue;
            }
            ResultPtr result = run_query(engine, line, "");
            std::string out = render(result.get(), json, explain);
            if (siq_result_frame_count(result.get()) == 0 && !json) out = "no matches\n" + out;
            std::cout << out << std::flush;
        } catch (const Failure& e) {
            std::cout << "error: " << e.what() << "\n" << std::flush;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic frame retrieval over object detections"};
    app.require_subcommand(1);

    Inputs in;
    std::string q;
    std::string atomese_file;
    std::string format = "text";
    std::string out_path;
    std::string out_dir;
    bool explain = false;

    auto* ingest = app.add_subcommand("ingest", "Build the store from detections and report its size");
    in.add_to(ingest);
    ingest->add_option("--out", out_path, "Also write the store as Atomese");

    auto add_query_opts = [&](CLI::App* cmd, bool with_atomese) {
        auto* qo = cmd->add_option("--q", q, "Surface query, e.g. \"FIND FRAMES WHERE person INSIDE car\"");
        if (with_atomese) {
            auto* ao = cmd->add_option("--atomese", atomese_file, "Atomese query file")->check(CLI::ExistingFile);
            qo->excludes(ao);
            cmd->require_option(1, 0);
        } else {
            qo->required();
        }
    };

    auto* query = app.add_subcommand("query", "Run one query");
    in.add_to(query);
    add_query_opts(query, true);
    query->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    query->add_flag("--explain", explain, "Append the rule execution log");

    auto* check_cmd = app.add_subcommand("check", "Compare engine and brute-force oracle on one query");
    in.add_to(check_cmd);
    add_query_opts(check_cmd, false);

    auto* dump = app.add_subcommand("dump", "Write the full store as Atomese");
    in.add_to(dump);
    dump->add_option("--out", out_path, "Output file (default: stdout)");

    auto* load = app.add_subcommand("load", "Load an Atomese dump and report its size");
    in.add_to(load);
    load->add_option("--out", out_path, "Write the loaded store back out");

    auto* repl_cmd = app.add_subcommand("repl", "Read one surface query per line");
    in.add_to(repl_cmd);
    repl_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    repl_cmd->add_flag("--explain", explain, "Start with the execution log enabled");

    auto* render_cmd = app.add_subcommand("render", "Write one SVG overlay per matching frame");
    in.add_to(render_cmd);
    add_query_opts(render_cmd, true);
    render_cmd->add_option("--out-dir", out_dir, "Directory for the SVG files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*ingest) {
            EnginePtr engine = in.open();
            if (!out_path.empty()) {
                char* s = nullptr;
                check(engine.get(), siq_engine_dump_atomese(engine.get(), &s));
                write_file(out_path, take(s));
            }
            std::cout << summary(engine.get());
            return 0;
        }
        if (*query) {
            EnginePtr engine = in.open();
            ResultPtr result = run_query(engine.get(), q, atomese_file);
            std::cout << render(result.get(), format == "json", explain);
            return siq_result_frame_count(result.get()) > 0 ? kExitMatch : kExitNoMatch;
        }
        if (*check_cmd) {
            EnginePtr engine = in.open();
            int agree = 0;
            char* report = nullptr;
            check(engine.get(), siq_engine_check(engine.get(), q.c_str(), &agree, &report));
            std::cout << take(report);
            return agree ? 0 : 1;
        }
        if (*dump || *load) {
            EnginePtr engine = in.open();
            if (*load && out_path.empty()) {
                std::cout << summary(engine.get());
                return 0;
            }
            char* s = nullptr;
            check(engine.get(), siq_engine_dump_atomese(engine.get(), &s));
            std::string text = take(s);
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return 0;
        }
        if (*repl_cmd) {
            EnginePtr engine = in.open(false);
            return repl(engine.get(), format == "json", explain);
        }
        if (*render_cmd) {
            EnginePtr engine = in.open();
            ResultPtr result = run_query(engine.get(), q, atomese_file);
            std::filesystem::create_directories(out_dir);
            const std::size_t n = siq_result_frame_count(result.get());
            for (std::size_t i = 0; i < n; ++i) {
                char* svg = nullptr;
                check(nullptr, siq_result_svg(result.get(), i, &svg));
                std::filesystem::path path =
                    std::filesystem::path(out_dir) / ("frame_" + file_safe(siq_result_frame_id(result.get(), i)) + ".svg");
                write_file(path.string(), take(svg));
                std::cout << path.string() << "\n";
            }
            return n > 0 ? kExitMatch : kExitNoMatch;
        }
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
