#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "slantcheck/tolerances.hpp"

namespace slantcheck {

// Report value tree.  Object keys keep insertion order so the machine
// rendering is byte-deterministic.
class RVal {
 public:
  enum class Kind { Null, Bool, Num, Str, Arr, Obj };

  RVal() = default;
  RVal(bool b) : kind_(Kind::Bool), bool_(b) {}
  RVal(double v) : kind_(Kind::Num), num_(v) {}
  RVal(int v) : kind_(Kind::Num), num_(v) {}
  RVal(std::size_t v) : kind_(Kind::Num), num_(static_cast<double>(v)) {}
  RVal(const char* s) : kind_(Kind::Str), str_(s) {}
  RVal(std::string s) : kind_(Kind::Str), str_(std::move(s)) {}

  static RVal array() {
    RVal v;
    v.kind_ = Kind::Arr;
    return v;
  }
  static RVal object() {
    RVal v;
    v.kind_ = Kind::Obj;
    return v;
  }

  Kind kind() const { return kind_; }
  bool as_bool() const { return bool_; }
  double as_num() const { return num_; }
  const std::string& as_str() const { return str_; }
  const std::vector<RVal>& items() const { return arr_; }
  const std::vector<std::pair<std::string, RVal>>& fields() const {
    return obj_;
  }

  void push(RVal v) { arr_.push_back(std::move(v)); }
  void set(std::string key, RVal v) {
    obj_.emplace_back(std::move(key), std::move(v));
  }

 private:
  Kind kind_ = Kind::Null;
  bool bool_ = false;
  double num_ = 0.0;
  std::string str_;
  std::vector<RVal> arr_;
  std::vector<std::pair<std::string, RVal>> obj_;
};

struct CheckRecord {
  std::string name;
  std::string kind;
  bool pass = false;
  bool skipped = false;
  RVal details = RVal::object();
};

struct Report {
  std::string scenario;
  Tolerances tols;
  std::vector<CheckRecord> checks;
  bool pass = false;  // every non-skipped check passed
};

// Renders a double with 17 significant digits (round-trip exact).
std::string format_number(double v);

// Single-line JSON with stable key order; byte-identical across runs.
std::string emit_machine(const Report& report);

// Multi-line readable rendering of the same content.
std::string emit_human(const Report& report);

}  // namespace slantcheck
