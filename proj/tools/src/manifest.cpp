/*
 Copyright 2026 The switchopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "switchopt/cli/manifest.hpp"

#include "switchopt/csv_io.hpp"
#include "switchopt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace switchopt::cli {

namespace {

struct Value {
    enum class Kind { Number, Bool, String, Array };
    Kind kind = Kind::Number;
    double number = 0.0;
    bool boolean = false;
    std::string text;
    std::vector<Value> items;
};

struct Entry {
    Value value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

class ValueParser {
public:
    ValueParser(const std::string& text, int line) : text_(text), line_(line) {}

    Value parse() {
        Value v = value();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing characters '" + text_.substr(pos_) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    Value value() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("missing value");
        }
        const char c = text_[pos_];
        if (c == '[') {
            return array();
        }
        if (c == '"') {
            return string();
        }
        return scalar();
    }

    Value array() {
        Value v;
        v.kind = Value::Kind::Array;
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(value());
            skip_ws();
            if (pos_ >= text_.size()) {
                fail("unterminated array");
            }
            if (text_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ']') {
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value string() {
        Value v;
        v.kind = Value::Kind::String;
        const auto close = text_.find('"', pos_ + 1);
        if (close == std::string::npos) {
            fail("unterminated string");
        }
        v.text = text_.substr(pos_ + 1, close - pos_ - 1);
        pos_ = close + 1;
        return v;
    }

    Value scalar() {
        auto end = pos_;
        while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
               !std::isspace(static_cast<unsigned char>(text_[end]))) {
            ++end;
        }
        const std::string token = text_.substr(pos_, end - pos_);
        pos_ = end;
        Value v;
        if (token == "true" || token == "false") {
            v.kind = Value::Kind::Bool;
            v.boolean = token == "true";
            return v;
        }
        const char* begin = token.c_str();
        char* stop = nullptr;
        errno = 0;
        v.number = std::strtod(begin, &stop);
        if (token.empty() || stop != begin + token.size() || errno == ERANGE) {
            fail("cannot parse value '" + token + "'");
        }
        return v;
    }

    const std::string& text_;
    int line_;
    std::size_t pos_ = 0;
};

int bracket_balance(const std::string& s) {
    int depth = 0;
    bool quoted = false;
    for (const char c : s) {
        if (c == '"') {
            quoted = !quoted;
        } else if (!quoted && c == '[') {
            ++depth;
        } else if (!quoted && c == ']') {
            --depth;
        }
    }
    return depth;
}

Document parse_document(const std::string& text) {
    Document doc;
    std::istringstream is(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    bool have_section = false;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("malformed section header '" + line + "'", line_no);
            }
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) {
                throw ParseError("empty section name", line_no);
            }
            if (doc.contains(current)) {
                throw ParseError("duplicate section [" + current + "]", line_no);
            }
            doc[current].line = line_no;
            have_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        if (!have_section) {
            throw ParseError("key outside of any section", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value_text = trim(line.substr(eq + 1));
        const int start_line = line_no;
        while (bracket_balance(value_text) > 0 && std::getline(is, raw)) {
            ++line_no;
            value_text += " " + trim(strip_comment(raw));
        }
        if (key.empty()) {
            throw ParseError("empty key", start_line);
        }
        auto& entries = doc[current].entries;
        if (entries.contains(key)) {
            throw ParseError("duplicate key '" + key + "' in [" + current + "]", start_line);
        }
        entries[key] = Entry{ValueParser(value_text, start_line).parse(), start_line};
    }
    return doc;
}

std::string join(const std::set<std::string>& keys) {
    std::string out;
    for (const auto& k : keys) {
        out += out.empty() ? k : ", " + k;
    }
    return out;
}

// Typed access to one section, with schema checks.
class SectionReader {
public:
    SectionReader(const Document& doc, const std::string& name, std::set<std::string> accepted)
        : name_(name), accepted_(std::move(accepted)) {
        const auto it = doc.find(name);
        if (it != doc.end()) {
            section_ = &it->second;
            for (const auto& [key, entry] : section_->entries) {
                if (!accepted_.contains(key)) {
                    throw ParseError("unknown key '" + key + "' in [" + name + "]; accepted keys: " +
                                         join(accepted_),
                                     entry.line);
                }
            }
        }
    }

    bool present() const { return section_ != nullptr; }
    bool has(const std::string& key) const { return section_ && section_->entries.contains(key); }

    const Entry& require(const std::string& key) const {
        if (!has(key)) {
            throw ParseError(key + " required (in [" + name_ + "])", 0);
        }
        return section_->entries.at(key);
    }

    double number(const std::string& key) const {
        const Entry& e = require(key);
        if (e.value.kind != Value::Kind::Number) {
            throw ParseError("'" + key + "' must be a number", e.line);
        }
        return e.value.number;
    }
    double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    long integer(const std::string& key) const {
        const Entry& e = require(key);
        const double v = number(key);
        if (std::floor(v) != v || std::abs(v) > 1e15) {
            throw ParseError("'" + key + "' must be an integer", e.line);
        }
        return static_cast<long>(v);
    }
    long integer_or(const std::string& key, long fallback) const { return has(key) ? integer(key) : fallback; }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const Entry& e = require(key);
        if (e.value.kind != Value::Kind::Bool) {
            throw ParseError("'" + key + "' must be true or false", e.line);
        }
        return e.value.boolean;
    }

    std::string string(const std::string& key) const {
        const Entry& e = require(key);
        if (e.value.kind != Value::Kind::String) {
            throw ParseError("'" + key + "' must be a quoted string", e.line);
        }
        return e.value.text;
    }
    std::string string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    Vector vector(const std::string& key) const {
        const Entry& e = require(key);
        return to_vector(e.value, key, e.line);
    }
    Vector vector_or(const std::string& key, const Vector& fallback) const {
        return has(key) ? vector(key) : fallback;
    }

    Matrix matrix(const std::string& key) const {
        const Entry& e = require(key);
        if (e.value.kind != Value::Kind::Array) {
            throw ParseError("'" + key + "' must be an array", e.line);
        }
        if (e.value.items.empty() || e.value.items.front().kind != Value::Kind::Array) {
            // Flat array: column vector.
            const Vector v = to_vector(e.value, key, e.line);
            return Matrix(v);
        }
        const auto rows = static_cast<Eigen::Index>(e.value.items.size());
        const auto cols = static_cast<Eigen::Index>(e.value.items.front().items.size());
        Matrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Vector row = to_vector(e.value.items[static_cast<std::size_t>(r)], key, e.line);
            if (row.size() != cols) {
                throw ParseError("'" + key + "' has ragged rows", e.line);
            }
            m.row(r) = row.transpose();
        }
        return m;
    }

    std::vector<Vector> vector_list(const std::string& key) const {
        const Entry& e = require(key);
        if (e.value.kind != Value::Kind::Array) {
            throw ParseError("'" + key + "' must be an array of arrays", e.line);
        }
        std::vector<Vector> out;
        for (const Value& item : e.value.items) {
            out.push_back(to_vector(item, key, e.line));
        }
        return out;
    }

    int line_of(const std::string& key) const { return has(key) ? section_->entries.at(key).line : 0; }
    int header_line() const { return section_ ? section_->line : 0; }

private:
    static Vector to_vector(const Value& v, const std::string& key, int line) {
        if (v.kind != Value::Kind::Array) {
            throw ParseError("'" + key + "' must be an array of numbers", line);
        }
        Vector out(static_cast<Eigen::Index>(v.items.size()));
        for (std::size_t i = 0; i < v.items.size(); ++i) {
            if (v.items[i].kind != Value::Kind::Number) {
                throw ParseError("'" + key + "' must contain only numbers", line);
            }
            out[static_cast<Eigen::Index>(i)] = v.items[i].number;
        }
        return out;
    }

    std::string name_;
    std::set<std::string> accepted_;
    const Section* section_ = nullptr;
};

ModelSelector parse_model(const Document& doc) {
    const SectionReader model(doc, "model", {"name", "x0", "t_f", "terminal_Q", "terminal_ref"});
    if (!model.present()) {
        throw ParseError("[model] section required", 0);
    }
    ModelSelector sel;
    sel.name = model.string("name");

    if (sel.name != "affine_quadratic") {
        for (const char* key : {"x0", "t_f", "terminal_Q", "terminal_ref"}) {
            if (model.has(key)) {
                throw ParseError(std::string("'") + key + "' only applies to name = \"affine_quadratic\"; use [model.params] for builtin overrides",
                                 model.line_of(key));
            }
        }
        const auto known = builtin_names();
        if (std::find(known.begin(), known.end(), sel.name) == known.end()) {
            throw ParseError("unknown model '" + sel.name + "'", model.line_of("name"));
        }
        const auto it = doc.find("model.params");
        if (it != doc.end()) {
            const ParameterMap defaults = builtin_parameters(sel.name);
            for (const auto& [key, entry] : it->second.entries) {
                if (!defaults.contains(key)) {
                    std::set<std::string> accepted;
                    for (const auto& [k, v] : defaults) {
                        accepted.insert(k);
                    }
                    throw ParseError("unknown parameter '" + key + "' for model '" + sel.name +
                                         "'; accepted: " + join(accepted),
                                     entry.line);
                }
                if (entry.value.kind != Value::Kind::Number) {
                    throw ParseError("parameter '" + key + "' must be a number", entry.line);
                }
                sel.overrides[key] = entry.value.number;
            }
        }
        for (const auto& [name, section] : doc) {
            if (name.rfind("mode.", 0) == 0) {
                throw ParseError("[" + name + "] only applies to affine_quadratic models", section.line);
            }
        }
        return sel;
    }

    if (doc.contains("model.params")) {
        throw ParseError("[model.params] only applies to builtin models", doc.at("model.params").line);
    }
    AffineQuadraticSpec spec;
    spec.x0 = model.vector("x0");
    spec.t_f = model.number("t_f");
    const auto n = spec.x0.size();
    spec.terminal_Q = model.has("terminal_Q") ? model.matrix("terminal_Q") : Matrix::Zero(n, n);
    spec.terminal_ref = model.vector_or("terminal_ref", Vector::Zero(n));

    for (int i = 1;; ++i) {
        const std::string name = "mode." + std::to_string(i);
        const SectionReader mode(doc, name,
                                 {"A", "B", "d", "Q", "x_ref", "R", "u_ref", "offset", "lower", "upper"});
        if (!mode.present()) {
            break;
        }
        AffineQuadraticMode m;
        m.A = mode.matrix("A");
        m.B = mode.has("B") ? mode.matrix("B") : Matrix::Zero(n, 0);
        const auto k = m.B.cols();
        m.d = mode.vector_or("d", Vector::Zero(n));
        m.Q = mode.has("Q") ? mode.matrix("Q") : Matrix::Zero(n, n);
        m.x_ref = mode.vector_or("x_ref", Vector::Zero(n));
        if (k > 0) {
            const Matrix r = mode.matrix("R");
            m.R = r.cols() == 1 && k > 1 ? Matrix(r.col(0).asDiagonal()) : r;
        } else {
            m.R = Matrix::Zero(0, 0);
        }
        m.u_ref = mode.vector_or("u_ref", Vector::Zero(k));
        m.offset = mode.number_or("offset", 0.0);
        constexpr double inf = std::numeric_limits<double>::infinity();
        m.lower = mode.vector_or("lower", Vector::Constant(k, -inf));
        m.upper = mode.vector_or("upper", Vector::Constant(k, inf));
        spec.modes.push_back(std::move(m));
    }
    if (spec.modes.empty()) {
        throw ParseError("affine_quadratic model needs sections [mode.1], [mode.2], ...", model.header_line());
    }
    for (const auto& [name, section] : doc) {
        if (name.rfind("mode.", 0) == 0) {
            const std::string idx = name.substr(5);
            const bool numeric = !idx.empty() && std::all_of(idx.begin(), idx.end(), ::isdigit);
            if (!numeric || std::stoul(idx) < 1 || std::stoul(idx) > spec.modes.size()) {
                throw ParseError("mode sections must be numbered consecutively from 1; found [" + name + "]",
                                 section.line);
            }
        }
    }
    sel.affine = std::move(spec);
    return sel;
}

SolveConfig parse_solve(const Document& doc) {
    const SectionReader solve(doc, "solve",
                              {"dt", "integrator", "max_iters", "alpha", "beta", "max_backtracks",
                               "theta_tol", "armijo_on_blend", "shooting_segments", "shooting_K",
                               "shooting_z_steps", "seed"});
    SolveConfig c;
    c.dt = solve.number("dt");
    const std::string integrator = solve.string_or("integrator", "euler");
    if (integrator == "euler") {
        c.integrator = Integrator::Euler;
    } else if (integrator == "trapezoid") {
        c.integrator = Integrator::Trapezoid;
    } else {
        throw ParseError("integrator must be \"euler\" or \"trapezoid\"", solve.line_of("integrator"));
    }
    c.max_iters = static_cast<int>(solve.integer_or("max_iters", c.max_iters));
    c.armijo_alpha = solve.number_or("alpha", c.armijo_alpha);
    c.armijo_beta = solve.number_or("beta", c.armijo_beta);
    c.max_backtracks = static_cast<int>(solve.integer_or("max_backtracks", c.max_backtracks));
    c.theta_tol = solve.number_or("theta_tol", c.theta_tol);
    c.armijo_on_blend = solve.boolean_or("armijo_on_blend", false);
    const long segments = solve.integer_or("shooting_segments", 1);
    if (segments > 1) {
        ShootingParams sp;
        sp.segments = static_cast<int>(segments);
        if (solve.has("shooting_K")) {
            sp.penalty_K = solve.number("shooting_K");
        }
        sp.z_steps = static_cast<int>(solve.integer_or("shooting_z_steps", sp.z_steps));
        c.shooting = sp;
    } else if (segments < 1) {
        throw ParseError("shooting_segments must be >= 1", solve.line_of("shooting_segments"));
    }
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), solve.header_line());
    }
    return c;
}

}  // namespace

RunManifest parse_manifest_text(const std::string& text, const std::filesystem::path& base_dir) {
    const Document doc = parse_document(text);
    for (const auto& [name, section] : doc) {
        const bool known = name == "model" || name == "model.params" || name == "solve" || name == "init" ||
                           name == "output" || name.rfind("mode.", 0) == 0;
        if (!known) {
            throw ParseError("unknown section [" + name + "]; accepted: model, model.params, mode.<i>, solve, init, output",
                             section.line);
        }
    }
    if (!doc.contains("solve")) {
        throw ParseError("[solve] section required (dt required)", 0);
    }

    RunManifest m;
    m.model = parse_model(doc);
    m.solve = parse_solve(doc);
    m.seed = static_cast<std::uint64_t>(SectionReader(doc, "solve", {"dt", "integrator", "max_iters", "alpha", "beta",
                                                                     "max_backtracks", "theta_tol", "armijo_on_blend",
                                                                     "shooting_segments", "shooting_K",
                                                                     "shooting_z_steps", "seed"})
                                            .integer_or("seed", 0));

    const SectionReader init(doc, "init", {"kind", "mode", "inputs", "path"});
    const std::string kind = init.string_or("kind", "one_hot");
    if (kind == "one_hot") {
        m.init.kind = InitSpec::Kind::OneHot;
        const long mode = init.integer_or("mode", 1);
        if (mode < 1) {
            throw ParseError("mode is 1-based and must be >= 1", init.line_of("mode"));
        }
        m.init.mode = static_cast<int>(mode - 1);
    } else if (kind == "uniform") {
        m.init.kind = InitSpec::Kind::Uniform;
    } else if (kind == "csv") {
        m.init.kind = InitSpec::Kind::Csv;
        std::filesystem::path p = init.string("path");
        if (p.is_relative()) {
            p = base_dir / p;
        }
        if (!std::filesystem::exists(p)) {
            throw ParseError("initial control file '" + p.string() + "' does not exist", init.line_of("path"));
        }
        m.init.csv = p;
    } else {
        throw ParseError("init kind must be \"one_hot\", \"uniform\" or \"csv\"", init.line_of("kind"));
    }
    if (init.has("inputs")) {
        m.init.inputs = init.vector_list("inputs");
    }

    const SectionReader output(doc, "output", {"dir", "pwm_cycle", "write_costate"});
    std::filesystem::path dir = output.string_or("dir", "out");
    m.output_dir = dir.is_relative() ? base_dir / dir : dir;
    if (output.has("pwm_cycle")) {
        m.pwm_cycle = output.number("pwm_cycle");
        if (!(*m.pwm_cycle > 0.0)) {
            throw ParseError("pwm_cycle must be positive", output.line_of("pwm_cycle"));
        }
    }
    m.write_costate = output.boolean_or("write_costate", false);
    return m;
}

RunManifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ParseError("cannot read manifest '" + path.string() + "'", 0);
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_manifest_text(buf.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::current_path());
}

HybridModel build_model(const ModelSelector& selector) {
    if (selector.affine) {
        return affine_quadratic_model(*selector.affine);
    }
    return builtin_model(selector.name, selector.overrides);
}

EmbeddedControl build_initial_control(const InitSpec& init, const HybridModel& model, double dt) {
    const TimeGrid grid = TimeGrid::uniform(model.t_f, dt);
    switch (init.kind) {
        case InitSpec::Kind::Uniform: {
            if (init.inputs.empty()) {
                return EmbeddedControl::uniform(model, grid);
            }
            EmbeddedControl base = EmbeddedControl::one_hot(model, grid, 0, init.inputs);
            std::vector<ControlNode> nodes(base.nodes().begin(), base.nodes().end());
            for (ControlNode& node : nodes) {
                node.weights.setConstant(1.0 / model.num_modes());
            }
            return EmbeddedControl(grid, std::move(nodes));
        }
        case InitSpec::Kind::Csv: {
            std::ifstream is(init.csv);
            if (!is) {
                throw std::ios_base::failure("cannot open initial control '" + init.csv.string() + "'");
            }
            EmbeddedControl w = read_control_csv(is, model);
            if (!(w.grid() == grid)) {
                throw InvalidArgument("initial control CSV grid does not match t_f and dt");
            }
            return w;
        }
        case InitSpec::Kind::OneHot:
            break;
    }
    if (init.mode >= model.num_modes()) {
        throw InvalidArgument("initial mode " + std::to_string(init.mode + 1) + " exceeds the model's " +
                              std::to_string(model.num_modes()) + " modes");
    }
    return EmbeddedControl::one_hot(model, grid, init.mode, init.inputs);
}

}  // namespace switchopt::cli
