#include "tumatch/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tumatch/common.hpp"

namespace tumatch {

JValue JValue::boolean(bool b) {
    JValue v;
    v.kind_ = Kind::Bool;
    v.b_ = b;
    return v;
}
JValue JValue::integer(long long i) {
    JValue v;
    v.kind_ = Kind::Int;
    v.i_ = i;
    return v;
}
JValue JValue::number(double d) {
    JValue v;
    v.kind_ = Kind::Double;
    v.d_ = d;
    return v;
}
JValue JValue::string(std::string s) {
    JValue v;
    v.kind_ = Kind::String;
    v.s_ = std::move(s);
    return v;
}
JValue JValue::array() {
    JValue v;
    v.kind_ = Kind::Array;
    return v;
}
JValue JValue::object() {
    JValue v;
    v.kind_ = Kind::Object;
    return v;
}
JValue JValue::from_vector(const std::vector<double>& vec) {
    JValue v = array();
    for (double d : vec) v.push(number(d));
    return v;
}
JValue JValue::from_table(const Table& t) {
    JValue v = array();
    for (std::size_t i = 0; i < t.rows(); ++i) {
        JValue row = array();
        for (std::size_t j = 0; j < t.cols(); ++j) row.push(number(t(i, j)));
        v.push(std::move(row));
    }
    return v;
}
JValue JValue::from_strings(const std::vector<std::string>& vec) {
    JValue v = array();
    for (const auto& s : vec) v.push(string(s));
    return v;
}

JValue& JValue::set(const std::string& key, JValue v) {
    if (kind_ != Kind::Object) throw InvalidArgument("JValue: set on non-object");
    obj_.emplace_back(key, std::move(v));
    return *this;
}
JValue& JValue::push(JValue v) {
    if (kind_ != Kind::Array) throw InvalidArgument("JValue: push on non-array");
    arr_.push_back(std::move(v));
    return *this;
}

std::string format_double(double d) {
    if (!std::isfinite(d))
        throw ConvergenceError("output contains a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

namespace {

void escape_json(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void dump(const JValue& v, std::string& out, int indent) {
    const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(indent + 1), ' ');
    switch (v.kind()) {
    case JValue::Kind::Null: out += "null"; break;
    case JValue::Kind::Bool: out += v.as_bool() ? "true" : "false"; break;
    case JValue::Kind::Int: out += std::to_string(v.as_int()); break;
    case JValue::Kind::Double: out += format_double(v.as_double()); break;
    case JValue::Kind::String: escape_json(v.as_string(), out); break;
    case JValue::Kind::Array: {
        // flat arrays of scalars stay on one line
        bool scalars = true;
        for (const auto& it : v.items())
            if (it.kind() == JValue::Kind::Array || it.kind() == JValue::Kind::Object)
                scalars = false;
        if (v.items().empty()) {
            out += "[]";
        } else if (scalars) {
            out += '[';
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                if (i) out += ", ";
                dump(v.items()[i], out, 0);
            }
            out += ']';
        } else {
            out += "[\n";
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                out += pad_in;
                dump(v.items()[i], out, indent + 1);
                if (i + 1 < v.items().size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
        }
        break;
    }
    case JValue::Kind::Object: {
        if (v.members().empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < v.members().size(); ++i) {
            out += pad_in;
            escape_json(v.members()[i].first, out);
            out += ": ";
            dump(v.members()[i].second, out, indent + 1);
            if (i + 1 < v.members().size()) out += ',';
            out += '\n';
        }
        out += pad + "}";
        break;
    }
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void flatten_csv(const JValue& v, const std::string& path, std::string& out) {
    switch (v.kind()) {
    case JValue::Kind::Object:
        for (const auto& [key, val] : v.members())
            flatten_csv(val, path.empty() ? key : path + "." + key, out);
        break;
    case JValue::Kind::Array: {
        // 1-d or 2-d numeric blocks get index columns; anything else recurses
        bool nested = false;
        for (const auto& it : v.items())
            if (it.kind() == JValue::Kind::Array || it.kind() == JValue::Kind::Object)
                nested = true;
        if (!nested) {
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                const JValue& it = v.items()[i];
                out += csv_cell(path) + "," + std::to_string(i) + ",,";
                if (it.kind() == JValue::Kind::Double)
                    out += format_double(it.as_double());
                else if (it.kind() == JValue::Kind::Int)
                    out += std::to_string(it.as_int());
                else if (it.kind() == JValue::Kind::Bool)
                    out += it.as_bool() ? "true" : "false";
                else
                    out += csv_cell(it.as_string());
                out += '\n';
            }
        } else {
            bool matrix = true;
            for (const auto& it : v.items()) {
                if (it.kind() != JValue::Kind::Array) matrix = false;
                else
                    for (const auto& inner : it.items())
                        if (inner.kind() != JValue::Kind::Double &&
                            inner.kind() != JValue::Kind::Int)
                            matrix = false;
            }
            if (matrix) {
                for (std::size_t i = 0; i < v.items().size(); ++i)
                    for (std::size_t j = 0; j < v.items()[i].items().size(); ++j) {
                        const JValue& it = v.items()[i].items()[j];
                        out += csv_cell(path) + "," + std::to_string(i) + "," +
                               std::to_string(j) + ",";
                        out += it.kind() == JValue::Kind::Int
                                   ? std::to_string(it.as_int())
                                   : format_double(it.as_double());
                        out += '\n';
                    }
            } else {
                for (std::size_t i = 0; i < v.items().size(); ++i)
                    flatten_csv(v.items()[i], path + "." + std::to_string(i), out);
            }
        }
        break;
    }
    case JValue::Kind::Null: out += csv_cell(path) + ",,,\n"; break;
    case JValue::Kind::Bool:
        out += csv_cell(path) + ",,," + (v.as_bool() ? "true" : "false") + "\n";
        break;
    case JValue::Kind::Int:
        out += csv_cell(path) + ",,," + std::to_string(v.as_int()) + "\n";
        break;
    case JValue::Kind::Double:
        out += csv_cell(path) + ",,," + format_double(v.as_double()) + "\n";
        break;
    case JValue::Kind::String:
        out += csv_cell(path) + ",,," + csv_cell(v.as_string()) + "\n";
        break;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::vector<std::string> expected_couple_header(const TypeSpace& space) {
    std::vector<std::string> cols;
    const auto add = [&cols](const char* prefix, const TypeSide& side) {
        if (side.factored())
            for (const auto& d : side.dimensions())
                cols.push_back(std::string(prefix) + "." + d.name);
        else
            cols.push_back(std::string(prefix) + ".type");
    };
    add("x", space.men);
    add("y", space.women);
    return cols;
}

std::size_t side_index(const TypeSide& side, const std::vector<std::string>& cells,
                       std::size_t offset) {
    if (side.factored()) {
        std::vector<std::string> levels(cells.begin() + offset,
                                        cells.begin() + offset +
                                            side.dimensions().size());
        return side.index_of_levels(levels);
    }
    return side.index_of(cells[offset]);
}

} // namespace

std::string to_json(const JValue& v) {
    std::string out;
    dump(v, out, 0);
    out += '\n';
    return out;
}

std::string to_csv(const JValue& v) {
    std::string out = "field,i,j,value\n";
    flatten_csv(v, "", out);
    return out;
}

void write_couples(const std::string& path, const CoupleSample& sample,
                   const TypeSpace& space) {
    std::string out;
    const auto header = expected_couple_header(space);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    for (const auto& [i, j] : sample.pairs) {
        std::string row;
        const auto add_side = [&row](const TypeSide& side, std::size_t idx) {
            if (side.factored()) {
                for (std::size_t d = 0; d < side.dimensions().size(); ++d) {
                    if (!row.empty()) row += ',';
                    row += side.dimensions()[d].levels[side.level_of(idx, d)];
                }
            } else {
                if (!row.empty()) row += ',';
                row += side.labels()[idx];
            }
        };
        add_side(space.men, i);
        add_side(space.women, j);
        out += row;
        out += '\n';
    }
    write_text_file(path, out);
}

CoupleSample read_couples(const std::string& path, const TypeSpace& space) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open couples file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("couples file '" + path + "' is empty");
    const auto expected = expected_couple_header(space);
    const auto header = split_csv_line(line);
    if (header != expected) {
        std::string want;
        for (std::size_t c = 0; c < expected.size(); ++c) {
            if (c) want += ',';
            want += expected[c];
        }
        throw ConfigError("couples file '" + path + "': header must be '" + want + "'");
    }
    const std::size_t men_cols =
        space.men.factored() ? space.men.dimensions().size() : 1;

    CoupleSample sample;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != expected.size())
            throw ConfigError("couples file '" + path + "' line " +
                              std::to_string(line_no) + ": expected " +
                              std::to_string(expected.size()) + " columns, got " +
                              std::to_string(cells.size()));
        try {
            const std::size_t i = side_index(space.men, cells, 0);
            const std::size_t j = side_index(space.women, cells, men_cols);
            sample.pairs.emplace_back(static_cast<std::uint32_t>(i),
                                      static_cast<std::uint32_t>(j));
        } catch (const InvalidArgument& e) {
            throw ConfigError("couples file '" + path + "' line " +
                              std::to_string(line_no) + ": " + e.what());
        }
    }
    if (sample.pairs.empty())
        throw ConfigError("couples file '" + path + "' has no data rows");
    return sample;
}

std::vector<double> read_margin_file(const std::string& path,
                                     const std::vector<std::string>& labels) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open margins file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        split_csv_line(line) != std::vector<std::string>{"type", "probability"})
        throw ConfigError("margins file '" + path +
                          "': header must be 'type,probability'");
    std::vector<double> out(labels.size(), -1.0);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw ConfigError("margins file '" + path + "' line " +
                              std::to_string(line_no) + ": expected 2 columns");
        const auto it = std::find(labels.begin(), labels.end(), cells[0]);
        if (it == labels.end())
            throw ConfigError("margins file '" + path + "' line " +
                              std::to_string(line_no) + ": unknown type '" +
                              cells[0] + "'");
        char* end = nullptr;
        const double v = std::strtod(cells[1].c_str(), &end);
        if (end == cells[1].c_str() || *end != '\0')
            throw ConfigError("margins file '" + path + "' line " +
                              std::to_string(line_no) + ": bad probability '" +
                              cells[1] + "'");
        out[static_cast<std::size_t>(it - labels.begin())] = v;
    }
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (out[k] < 0.0)
            throw ConfigError("margins file '" + path + "': no probability for type '" +
                              labels[k] + "'");
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing file '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace tumatch
