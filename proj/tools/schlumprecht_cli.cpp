#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schlumprecht/schlumprecht.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schlumprecht;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Cache directory: --cache-dir beats SCHLUMPRECHT_CACHE_DIR; empty disables.
fs::path cache_file(const std::string& flag_dir) {
    std::string dir = flag_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("SCHLUMPRECHT_CACHE_DIR")) dir = env;
    }
    if (dir.empty()) return {};
    return fs::path(dir) / "norm-cache.txt";
}

struct CacheSession {
    fs::path path;
    NormCache cache;

    explicit CacheSession(const std::string& flag_dir) : path(cache_file(flag_dir)) {
        if (!path.empty()) cache.load_file(path);
    }
    NormCache* handle() { return path.empty() ? nullptr : &cache; }
    void persist() {
        if (path.empty()) return;
        fs::create_directories(path.parent_path());
        cache.save_file(path);
    }
};

void emit(const json& j, const std::string& output) {
    const std::string text = j.dump(2) + "\n";
    if (output.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        atomic_write(output, text);
    }
}

json interval_json(const IndexInterval& e) {
    return json::array({e.lo, e.hi});
}

int cmd_norm(const std::string& input, const std::string& output, bool certified,
             NormOptions opts) {
    const SparseVector x = load_vector(input);
    Timer timer;
    const NormResult res = norm(x, opts);
    json out = {{"value", res.value},
                {"certificate", certificate_to_json(res.certificate)}};
    if (certified) {
        const NormEnclosure enc = certified_norm(x, opts);
        out["enclosure"] = {{"lower", enc.lower}, {"upper", enc.upper}};
    }
    out["timing_seconds"] = timer.seconds();
    emit(out, output);
    return 0;
}

int cmd_split_sum(const std::string& input, const std::string& output, std::size_t pieces,
                  NormOptions opts) {
    const SparseVector x = load_vector(input);
    Timer timer;
    const SplitSumResult res = split_sum(x, pieces, opts);
    json pieces_json = json::array();
    for (const IndexInterval& e : res.pieces) pieces_json.push_back(interval_json(e));
    emit({{"value", res.value},
          {"pieces", std::move(pieces_json)},
          {"timing_seconds", timer.seconds()}},
         output);
    return 0;
}

int cmd_level_norm(const std::string& input, const std::string& output, std::size_t level,
                   NormOptions opts) {
    const SparseVector x = load_vector(input);
    Timer timer;
    const double value = level_norm(x, level, opts);
    emit({{"value", value}, {"level", level}, {"timing_seconds", timer.seconds()}}, output);
    return 0;
}

// Build specs are JSON objects {kind, ...} with kind-specific parameters:
//   yardstick:         n, q[], start
//   constant-block:    n, start, normalized
//   l1-average:        m, block_length, start
//   yardstick-average: n, q[], m, start
//   interleave:        count, n_seq[], base_q, start
json require_field(const json& spec, const char* key) {
    if (!spec.contains(key)) {
        throw parse_error(std::string("build spec missing field \"") + key + "\"");
    }
    return spec.at(key);
}

std::vector<std::int64_t> int_list(const json& j, const char* key) {
    if (!j.is_array() || j.empty()) {
        throw parse_error(std::string("build spec field \"") + key +
                          "\" must be a nonempty array");
    }
    std::vector<std::int64_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) {
            throw parse_error(std::string("build spec field \"") + key +
                              "\" must contain integers");
        }
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

struct BuiltVector {
    std::string file;
    SparseVector vec;
    json extra;  // per-vector manifest fields
};

int cmd_build(const std::string& input, const std::string& output_dir, NormOptions opts) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw parse_error("cannot open " + input);
    json spec;
    try {
        spec = json::parse(in);
    } catch (const json::exception& e) {
        throw parse_error(std::string("build spec: ") + e.what());
    }
    if (!spec.is_object()) throw parse_error("build spec must be a JSON object");
    const std::string kind = require_field(spec, "kind").get<std::string>();
    const index_t start = spec.value("start", std::int64_t{1});

    std::vector<BuiltVector> built;
    json manifest = {{"kind", kind}, {"parameters", spec}};

    auto name_for = [](std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "vec_%03zu.txt", i + 1);
        return std::string(buf);
    };

    if (kind == "yardstick") {
        YardstickSpec ys{static_cast<int>(require_field(spec, "n").get<std::int64_t>()),
                         int_list(require_field(spec, "q"), "q"), start};
        const Yardstick y = build_yardstick(ys);
        for (std::size_t i = 0; i < y.vectors.size(); ++i) {
            built.push_back({name_for(i), y.vectors[i], {{"level", i + 1}}});
        }
        manifest["support"] = interval_json(y.support);
    } else if (kind == "constant-block") {
        const std::int64_t n = require_field(spec, "n").get<std::int64_t>();
        const bool normalized = spec.value("normalized", false);
        built.push_back({name_for(0), build_constant_block(n, start, normalized), {}});
    } else if (kind == "l1-average") {
        const std::int64_t m = require_field(spec, "m").get<std::int64_t>();
        const std::int64_t block_length = spec.value("block_length", std::int64_t{1});
        built.push_back({name_for(0), build_l1_average(m, block_length, start), {}});
    } else if (kind == "yardstick-average") {
        YardstickSpec ys{static_cast<int>(require_field(spec, "n").get<std::int64_t>()),
                         int_list(require_field(spec, "q"), "q"), start};
        const std::int64_t m = require_field(spec, "m").get<std::int64_t>();
        const YardstickAverage avg = build_yardstick_average(ys, m);
        for (std::size_t i = 0; i < avg.parts.size(); ++i) {
            built.push_back({name_for(i), avg.parts[i], {{"role", "part"}}});
        }
        built.push_back({name_for(avg.parts.size()), avg.z, {{"role", "sum"}}});
    } else if (kind == "interleave") {
        const std::int64_t count = require_field(spec, "count").get<std::int64_t>();
        const auto n_list = int_list(require_field(spec, "n_seq"), "n_seq");
        std::vector<int> n_seq;
        for (std::int64_t n : n_list) n_seq.push_back(static_cast<int>(n));
        InterleaveQuality quality;
        quality.base_q = spec.value("base_q", std::int64_t{2});
        const std::vector<Yardstick> fams =
            build_interleaved_sequence(n_seq, count, quality, start);
        json block_types = json::array();
        json families = json::array();
        std::size_t file_idx = 0;
        for (std::size_t k = 0; k < fams.size(); ++k) {
            block_types.push_back(fams[k].vectors.size());
            json files = json::array();
            for (const SparseVector& v : fams[k].vectors) {
                built.push_back({name_for(file_idx++), v, {{"family", k + 1}}});
                files.push_back(built.back().file);
            }
            families.push_back({{"support", interval_json(fams[k].support)},
                                {"files", std::move(files)}});
        }
        manifest["block_types"] = std::move(block_types);
        manifest["families"] = std::move(families);
    } else {
        throw parse_error("unknown build kind \"" + kind + "\"");
    }

    const fs::path dir = output_dir.empty() ? fs::path(".") : fs::path(output_dir);
    fs::create_directories(dir);
    json vectors = json::array();
    for (const BuiltVector& b : built) {
        atomic_write(dir / b.file, vector_to_text(b.vec));
        json entry = {{"file", b.file},
                      {"support", interval_json(b.vec.support_hull())},
                      {"norm", norm_value(b.vec, opts)}};
        for (auto it = b.extra.begin(); it != b.extra.end(); ++it) entry[it.key()] = it.value();
        vectors.push_back(std::move(entry));
    }
    manifest["vectors"] = std::move(vectors);
    atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
    std::printf("wrote %zu vector file(s) and manifest.json to %s\n", built.size(),
                dir.string().c_str());
    return 0;
}

int cmd_check(const std::string& suite, const std::string& output, SuiteConfig cfg) {
    const CheckReport rep = run_suite(suite, cfg);
    const json body = report_to_json(rep);
    const json wrapped = wrap_report(body);
    if (output.empty()) {
        std::fputs((wrapped.dump(2) + "\n").c_str(), stdout);
    } else {
        atomic_write(output, wrapped.dump(2) + "\n");
        fs::path csv = output;
        csv.replace_extension(".csv");
        atomic_write(csv, report_to_csv(rep));
    }
    return rep.pass ? 0 : 1;
}

int cmd_report(const std::string& input, const std::string& output) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw parse_error("cannot open " + input);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw parse_error(std::string("report JSON: ") + e.what());
    }
    if (j.contains("report")) j = j.at("report");
    CheckReport rep;
    try {
        rep.name = j.at("name").get<std::string>();
        rep.pass = j.at("pass").get<bool>();
        for (const auto& item : j.at("items")) {
            rep.items.push_back({item.at("k").get<std::int64_t>(),
                                 item.at("label").get<std::string>(),
                                 item.at("measured").get<double>(),
                                 item.at("bound").get<double>(),
                                 item.at("pass").get<bool>()});
        }
        rep.notes = j.value("notes", std::string{});
    } catch (const json::exception& e) {
        throw parse_error(std::string("report JSON: ") + e.what());
    }
    const std::string csv = report_to_csv(rep);
    if (output.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        atomic_write(output, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact norm engine for the Schlumprecht sequence space"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    std::string cache_dir;
    std::string suite;
    std::size_t max_support = NormOptions{}.max_support;
    std::size_t pieces = 2;
    std::size_t level = 0;
    std::uint64_t seed = 1;
    double tolerance = 1e-10;
    bool certified = false;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* opt = sub->add_option("--input", input, "input file");
        if (needs_input) opt->required();
        sub->add_option("--output", output, "output file (default: stdout)");
        sub->add_option("--cache-dir", cache_dir,
                        "norm cache directory (default: $SCHLUMPRECHT_CACHE_DIR)");
        sub->add_option("--max-support", max_support, "support guard for the exact solver");
    };

    CLI::App* norm_cmd = app.add_subcommand("norm", "exact norm with certificate");
    add_common(norm_cmd, true);
    norm_cmd->add_flag("--certified", certified, "emit a rounding-aware [lower, upper] enclosure");

    CLI::App* split_cmd = app.add_subcommand("split-sum", "maximal split sum over r pieces");
    add_common(split_cmd, true);
    split_cmd->add_option("--pieces", pieces, "number of pieces r")->check(CLI::PositiveNumber);

    CLI::App* level_cmd = app.add_subcommand("level-norm", "t-level truncation of the norm");
    add_common(level_cmd, true);
    level_cmd->add_option("--level", level, "truncation level t")->required();

    CLI::App* build_cmd = app.add_subcommand("build", "materialize a construction from a JSON spec");
    add_common(build_cmd, true);

    CLI::App* check_cmd = app.add_subcommand("check", "run a verification suite");
    add_common(check_cmd, false);
    check_cmd->add_option("--suite", suite, "suite name")->required();
    check_cmd->add_option("--seed", seed, "RNG seed for sampled suites");
    check_cmd->add_option("--tolerance", tolerance, "comparison tolerance");

    CLI::App* report_cmd = app.add_subcommand("report", "convert a JSON report to CSV");
    add_common(report_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CacheSession session(cache_dir);
        NormOptions opts;
        opts.max_support = max_support;
        opts.cache = session.handle();
        int rc = 0;
        if (norm_cmd->parsed()) {
            rc = cmd_norm(input, output, certified, opts);
        } else if (split_cmd->parsed()) {
            rc = cmd_split_sum(input, output, pieces, opts);
        } else if (level_cmd->parsed()) {
            rc = cmd_level_norm(input, output, level, opts);
        } else if (build_cmd->parsed()) {
            rc = cmd_build(input, output, opts);
        } else if (check_cmd->parsed()) {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.tolerance = tolerance;
            cfg.norm = opts;
            rc = cmd_check(suite, output, cfg);
        } else if (report_cmd->parsed()) {
            rc = cmd_report(input, output);
        }
        session.persist();
        return rc;
    } catch (const oracle_limit_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
