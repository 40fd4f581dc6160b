#include "curot/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace curot::io {

namespace {

// One CSV cell to double via from_chars; whitespace-trimmed, whole-cell match.
bool parse_cell(std::string_view cell, double& out) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
        cell.remove_suffix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[noreturn]] void fail_cell(const std::string& path, std::size_t row, std::size_t col,
                            const std::string& cell) {
    throw std::runtime_error(path + ": row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": '" + cell + "' is not a number");
}

double need_number(const json& j, const char* key, const std::string& source) {
    if (!j.is_number())
        throw std::runtime_error(source + ": key '" + key + "' must be a number");
    return j.get<double>();
}

bool need_bool(const json& j, const char* key, const std::string& source) {
    if (!j.is_boolean())
        throw std::runtime_error(source + ": key '" + key + "' must be a boolean");
    return j.get<bool>();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error(path + ": read failed");
    return std::move(ss).str();
}

void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error(tmp + ": write failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error(path + ": rename from temp file failed");
    }
}

std::string file_digest(const std::string& path) {
    const std::string bytes = read_file(path);
    return "0x" + hex64(fnv1a64(bytes.data(), bytes.size()));
}

Matrix read_matrix_csv(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty()) throw std::runtime_error(path + ": empty CSV");
    Matrix m;
    m.rows = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto cells = split_cells(lines[i]);
        if (i == 0) {
            m.cols = cells.size();
        } else if (cells.size() != m.cols) {
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) + " columns, expected " +
                                     std::to_string(m.cols));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v;
            if (!parse_cell(cells[j], v)) fail_cell(path, i + 1, j + 1, cells[j]);
            m.data.push_back(v);
        }
    }
    return m;
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    atomic_write(path, matrix_to_csv(m));
}

surv::SurvivalTable read_survival_csv(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty()) throw std::runtime_error(path + ": empty CSV");
    if (lines[0] != "time,event,risk")
        throw std::runtime_error(path + ": expected header 'time,event,risk', got '" +
                                 lines[0] + "'");
    surv::SurvivalTable t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_cells(lines[i]);
        if (cells.size() != 3)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) + " columns, expected 3");
        double time, event, risk;
        if (!parse_cell(cells[0], time)) fail_cell(path, i + 1, 1, cells[0]);
        if (!parse_cell(cells[1], event)) fail_cell(path, i + 1, 2, cells[1]);
        if (!parse_cell(cells[2], risk)) fail_cell(path, i + 1, 3, cells[2]);
        if (event != 0.0 && event != 1.0)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) +
                                     ": event must be 0 or 1");
        t.time.push_back(time);
        t.event.push_back(static_cast<std::uint8_t>(event));
        t.risk.push_back(risk);
    }
    if (t.size() == 0) throw std::runtime_error(path + ": no data rows");
    return t;
}

std::string survival_to_csv(const surv::SurvivalTable& t) {
    std::string out = "time,event,risk\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += format_double(t.time[i]);
        out += ',';
        out += t.event[i] ? '1' : '0';
        out += ',';
        out += format_double(t.risk[i]);
        out += '\n';
    }
    return out;
}

void write_survival_csv(const std::string& path, const surv::SurvivalTable& t) {
    atomic_write(path, survival_to_csv(t));
}

std::string km_to_csv(const surv::KMCurve& curve) {
    std::string out = "time,survival,at_risk,events\n";
    for (const auto& p : curve) {
        out += format_double(p.time);
        out += ',';
        out += format_double(p.survival);
        out += ',';
        out += std::to_string(p.at_risk);
        out += ',';
        out += std::to_string(p.events);
        out += '\n';
    }
    return out;
}

void write_km_csv(const std::string& path, const surv::KMCurve& curve) {
    atomic_write(path, km_to_csv(curve));
}

surv::KMCurve read_km_csv(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty()) throw std::runtime_error(path + ": empty CSV");
    if (lines[0] != "time,survival,at_risk,events")
        throw std::runtime_error(path + ": expected header 'time,survival,at_risk,events'");
    surv::KMCurve curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_cells(lines[i]);
        if (cells.size() != 4)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) + " columns, expected 4");
        double time, survival, at_risk, events;
        if (!parse_cell(cells[0], time)) fail_cell(path, i + 1, 1, cells[0]);
        if (!parse_cell(cells[1], survival)) fail_cell(path, i + 1, 2, cells[1]);
        if (!parse_cell(cells[2], at_risk)) fail_cell(path, i + 1, 3, cells[2]);
        if (!parse_cell(cells[3], events)) fail_cell(path, i + 1, 4, cells[3]);
        curve.push_back({time, survival, static_cast<long>(at_risk),
                         static_cast<long>(events)});
    }
    return curve;
}

json to_json(const RunConfig& c) {
    return json{{"epsilon", c.epsilon},
                {"gamma", c.gamma},
                {"iota", c.iota},
                {"max_iters", c.max_iters},
                {"tol", c.tol},
                {"log_domain", c.log_domain},
                {"tau", c.tau},
                {"beta", c.beta},
                {"rho", c.rho},
                {"tau_r", c.tau_r},
                {"lambda_wsi", c.lambda_wsi},
                {"lambda_gen", c.lambda_gen},
                {"lambda_contrast", c.lambda_contrast},
                {"lambda_inst", c.lambda_inst},
                {"rescale_plan", c.rescale_plan},
                {"seed", c.seed}};
}

void apply_json(RunConfig& c, const json& j, const std::string& source) {
    if (!j.is_object()) throw std::runtime_error(source + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "epsilon")
            c.epsilon = need_number(value, "epsilon", source);
        else if (key == "gamma")
            c.gamma = need_number(value, "gamma", source);
        else if (key == "iota")
            c.iota = need_number(value, "iota", source);
        else if (key == "max_iters") {
            if (!value.is_number_integer())
                throw std::runtime_error(source + ": key 'max_iters' must be an integer");
            c.max_iters = value.get<long>();
        } else if (key == "tol")
            c.tol = need_number(value, "tol", source);
        else if (key == "log_domain")
            c.log_domain = need_bool(value, "log_domain", source);
        else if (key == "tau")
            c.tau = need_number(value, "tau", source);
        else if (key == "beta")
            c.beta = need_number(value, "beta", source);
        else if (key == "rho")
            c.rho = need_number(value, "rho", source);
        else if (key == "tau_r")
            c.tau_r = need_number(value, "tau_r", source);
        else if (key == "lambda_wsi")
            c.lambda_wsi = need_number(value, "lambda_wsi", source);
        else if (key == "lambda_gen")
            c.lambda_gen = need_number(value, "lambda_gen", source);
        else if (key == "lambda_contrast")
            c.lambda_contrast = need_number(value, "lambda_contrast", source);
        else if (key == "lambda_inst")
            c.lambda_inst = need_number(value, "lambda_inst", source);
        else if (key == "rescale_plan")
            c.rescale_plan = need_bool(value, "rescale_plan", source);
        else if (key == "seed") {
            if (!value.is_number_integer() || (value.is_number_integer() && value.get<long long>() < 0))
                throw std::runtime_error(source + ": key 'seed' must be a nonnegative integer");
            c.seed = value.get<std::uint64_t>();
        } else {
            throw std::runtime_error(source + ": unknown config key '" + key + "'");
        }
    }
}

RunConfig load_run_config(const std::optional<std::string>& config_path) {
    RunConfig c;
    std::string path;
    if (config_path) {
        path = *config_path;
    } else if (const char* env = std::getenv("CUROT_CONFIG"); env && *env) {
        path = env;
    }
    if (!path.empty()) {
        json j;
        try {
            j = json::parse(read_file(path));
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
        apply_json(c, j, path);
    }
    return c;
}

ot::SolverConfig solver_part(const RunConfig& c) {
    ot::SolverConfig s;
    s.epsilon = c.epsilon;
    s.gamma = c.gamma;
    s.iota = c.iota;
    s.max_iters = static_cast<int>(c.max_iters);
    s.tol = c.tol;
    s.log_domain = c.log_domain;
    return s;
}

}  // namespace curot::io
