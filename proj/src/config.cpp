#include "qwalk/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::config {

namespace {

struct TomlValue {
    enum class Kind { string, integer, floating, boolean, array } kind;
    std::string s;
    long long i = 0;
    double f = 0.0;
    bool b = false;
    std::vector<TomlValue> items;
};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    std::ostringstream msg;
    msg << "config: line " << line << ": " << message;
    throw precondition_error(msg.str());
}

TomlValue parse_scalar(const std::string& raw, std::size_t line) {
    TomlValue v;
    if (raw.empty()) fail(line, "empty value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        v.kind = TomlValue::Kind::string;
        v.s = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.b = (raw == "true");
        return v;
    }
    const bool looks_float = raw.find_first_of(".eE") != std::string::npos &&
                             raw.find_first_not_of("+-0123456789.eE") == std::string::npos;
    errno = 0;
    char* end = nullptr;
    if (!looks_float) {
        const long long iv = std::strtoll(raw.c_str(), &end, 10);
        if (end && *end == '\0' && errno == 0) {
            v.kind = TomlValue::Kind::integer;
            v.i = iv;
            return v;
        }
    }
    errno = 0;
    end = nullptr;
    const double fv = std::strtod(raw.c_str(), &end);
    if (end && *end == '\0' && errno == 0 && std::isfinite(fv)) {
        v.kind = TomlValue::Kind::floating;
        v.f = fv;
        return v;
    }
    fail(line, "cannot parse value '" + raw + "'");
}

TomlValue parse_value(const std::string& raw, std::size_t line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        TomlValue v;
        v.kind = TomlValue::Kind::array;
        const std::string inner = trim(raw.substr(1, raw.size() - 2));
        if (inner.empty()) return v;
        std::size_t pos = 0;
        bool in_string = false;
        std::size_t start = 0;
        for (; pos <= inner.size(); ++pos) {
            if (pos == inner.size() || (inner[pos] == ',' && !in_string)) {
                const std::string piece = trim(inner.substr(start, pos - start));
                if (piece.empty()) fail(line, "empty array element");
                v.items.push_back(parse_scalar(piece, line));
                start = pos + 1;
            } else if (inner[pos] == '"') {
                in_string = !in_string;
            }
        }
        for (std::size_t k = 1; k < v.items.size(); ++k) {
            const bool numeric_mix =
                (v.items[k].kind == TomlValue::Kind::integer ||
                 v.items[k].kind == TomlValue::Kind::floating) &&
                (v.items[0].kind == TomlValue::Kind::integer ||
                 v.items[0].kind == TomlValue::Kind::floating);
            if (v.items[k].kind != v.items[0].kind && !numeric_mix) {
                fail(line, "arrays must be homogeneous");
            }
        }
        return v;
    }
    return parse_scalar(raw, line);
}

double as_double(const TomlValue& v, const std::string& key, std::size_t line) {
    if (v.kind == TomlValue::Kind::floating) return v.f;
    if (v.kind == TomlValue::Kind::integer) return static_cast<double>(v.i);
    fail(line, "key '" + key + "' expects a number");
}

long long as_integer(const TomlValue& v, const std::string& key, std::size_t line) {
    if (v.kind != TomlValue::Kind::integer) {
        fail(line, "key '" + key + "' expects an integer");
    }
    return v.i;
}

std::string as_string(const TomlValue& v, const std::string& key, std::size_t line) {
    if (v.kind != TomlValue::Kind::string) {
        fail(line, "key '" + key + "' expects a string");
    }
    return v.s;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw_line;
    std::size_t line_no = 0;

    while (std::getline(in, raw_line)) {
        ++line_no;
        // Strip comments outside strings.
        bool in_string = false;
        std::string stripped;
        for (char ch : raw_line) {
            if (ch == '"') in_string = !in_string;
            if (ch == '#' && !in_string) break;
            stripped.push_back(ch);
        }
        const std::string line = trim(stripped);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const TomlValue value = parse_value(trim(line.substr(eq + 1)), line_no);

        if (key == "scenario") {
            cfg.scenario = as_string(value, key, line_no);
        } else if (key == "dims") {
            if (value.kind != TomlValue::Kind::array) fail(line_no, "dims expects an array");
            cfg.dims.clear();
            for (const auto& item : value.items) {
                const long long d = as_integer(item, key, line_no);
                if (d <= 0) fail(line_no, "dims entries must be positive");
                cfg.dims.push_back(static_cast<std::size_t>(d));
            }
        } else if (key == "eps") {
            cfg.eps = as_double(value, key, line_no);
        } else if (key == "mass") {
            cfg.mass = as_double(value, key, line_no);
        } else if (key == "steps") {
            const long long s = as_integer(value, key, line_no);
            if (s < 0) fail(line_no, "steps must be non-negative");
            cfg.steps = static_cast<std::size_t>(s);
        } else if (key == "snapshot_every") {
            const long long s = as_integer(value, key, line_no);
            if (s < 0) fail(line_no, "snapshot_every must be non-negative");
            cfg.snapshot_every = static_cast<std::size_t>(s);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(as_integer(value, key, line_no));
        } else if (key == "threads") {
            const long long t = as_integer(value, key, line_no);
            if (t < 1) fail(line_no, "threads must be >= 1");
            cfg.threads = static_cast<unsigned>(t);
        } else if (key == "out") {
            cfg.out_dir = as_string(value, key, line_no);
        } else if (key == "eps_ladder") {
            if (value.kind != TomlValue::Kind::array) {
                fail(line_no, "eps_ladder expects an array");
            }
            cfg.eps_ladder.clear();
            for (const auto& item : value.items) {
                cfg.eps_ladder.push_back(as_double(item, key, line_no));
            }
        } else if (key == "final_time") {
            cfg.final_time = as_double(value, key, line_no);
        } else if (key == "b1_files") {
            if (value.kind != TomlValue::Kind::array) {
                fail(line_no, "b1_files expects an array");
            }
            cfg.b1_files.clear();
            for (const auto& item : value.items) {
                cfg.b1_files.push_back(as_string(item, key, line_no));
            }
        } else if (key == "c_file") {
            cfg.c_file = as_string(value, key, line_no);
        } else if (key == "tetrad") {
            cfg.tetrad = as_string(value, key, line_no);
        } else if (key == "c_override_file") {
            cfg.c_override_file = as_string(value, key, line_no);
        } else if (key == "c_override_mode") {
            cfg.c_override_mode = as_string(value, key, line_no);
            if (cfg.c_override_mode != "replace" && cfg.c_override_mode != "add") {
                fail(line_no, "c_override_mode must be 'replace' or 'add'");
            }
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw precondition_error("config: cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_common(const RunConfig& cfg) {
    if (cfg.scenario.empty()) {
        throw precondition_error("config: missing required key 'scenario'");
    }
    for (std::size_t d : cfg.dims) {
        if (d % 2 != 0 || d < 4) {
            throw precondition_error("config: dims must be even and >= 4");
        }
    }
    if (cfg.eps < 0.0) {
        throw precondition_error("config: eps must be positive");
    }
}

} // namespace qw::config
