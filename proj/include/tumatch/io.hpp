#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tumatch/table.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

// Output document tree. Emission is deterministic: object keys keep insertion
// order and every double is printed with 17 significant digits so values
// round-trip exactly. Non-finite numbers are rejected.
class JValue {
public:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };

    JValue() : kind_(Kind::Null) {}
    static JValue boolean(bool b);
    static JValue integer(long long i);
    static JValue number(double d);
    static JValue string(std::string s);
    static JValue array();
    static JValue object();
    static JValue from_vector(const std::vector<double>& v);
    static JValue from_table(const Table& t);
    static JValue from_strings(const std::vector<std::string>& v);

    Kind kind() const { return kind_; }
    JValue& set(const std::string& key, JValue v); // object append, returns *this
    JValue& push(JValue v);                        // array append, returns *this

    const std::vector<std::pair<std::string, JValue>>& members() const { return obj_; }
    const std::vector<JValue>& items() const { return arr_; }
    bool as_bool() const { return b_; }
    long long as_int() const { return i_; }
    double as_double() const { return d_; }
    const std::string& as_string() const { return s_; }

private:
    Kind kind_;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0.0;
    std::string s_;
    std::vector<JValue> arr_;
    std::vector<std::pair<std::string, JValue>> obj_;
};

std::string format_double(double d); // %.17g, throws on NaN/Inf
std::string to_json(const JValue& v);
// Long-format flattening: one `field,i,j,value` row per leaf, with empty
// index columns for scalars. Encodes exactly the numbers of the JSON form.
std::string to_csv(const JValue& v);

// Couples files: header `x.<dim>,...,y.<dim>,...`, one couple per row,
// values matched against the declared levels.
void write_couples(const std::string& path, const CoupleSample& sample,
                   const TypeSpace& space);
CoupleSample read_couples(const std::string& path, const TypeSpace& space);

// Margin override files: header `type,probability`, one row per type label.
std::vector<double> read_margin_file(const std::string& path,
                                     const std::vector<std::string>& labels);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace tumatch
