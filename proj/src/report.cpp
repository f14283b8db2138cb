#include "slantcheck/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "slantcheck/version.hpp"

namespace slantcheck {

std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
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

void append_json(std::string& out, const RVal& v) {
  switch (v.kind()) {
    case RVal::Kind::Null:
      out += "null";
      break;
    case RVal::Kind::Bool:
      out += v.as_bool() ? "true" : "false";
      break;
    case RVal::Kind::Num:
      out += format_number(v.as_num());
      break;
    case RVal::Kind::Str:
      append_json_string(out, v.as_str());
      break;
    case RVal::Kind::Arr: {
      out += '[';
      bool first = true;
      for (const RVal& item : v.items()) {
        if (!first) out += ',';
        first = false;
        append_json(out, item);
      }
      out += ']';
      break;
    }
    case RVal::Kind::Obj: {
      out += '{';
      bool first = true;
      for (const auto& kv : v.fields()) {
        if (!first) out += ',';
        first = false;
        append_json_string(out, kv.first);
        out += ':';
        append_json(out, kv.second);
      }
      out += '}';
      break;
    }
  }
}

std::string human_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

bool is_scalar(const RVal& v) {
  return v.kind() != RVal::Kind::Arr && v.kind() != RVal::Kind::Obj;
}

std::string scalar_text(const RVal& v) {
  switch (v.kind()) {
    case RVal::Kind::Null: return "-";
    case RVal::Kind::Bool: return v.as_bool() ? "yes" : "no";
    case RVal::Kind::Num: return human_number(v.as_num());
    case RVal::Kind::Str: return v.as_str();
    default: return "";
  }
}

bool all_scalars(const RVal& arr) {
  for (const RVal& item : arr.items())
    if (!is_scalar(item)) return false;
  return true;
}

void append_human(std::string& out, const RVal& v, const std::string& indent) {
  if (v.kind() == RVal::Kind::Obj) {
    for (const auto& kv : v.fields()) {
      out += indent + kv.first;
      if (is_scalar(kv.second)) {
        out += ": " + scalar_text(kv.second) + "\n";
      } else if (kv.second.kind() == RVal::Kind::Arr &&
                 all_scalars(kv.second)) {
        out += ": [";
        bool first = true;
        for (const RVal& item : kv.second.items()) {
          if (!first) out += ", ";
          first = false;
          out += scalar_text(item);
        }
        out += "]\n";
      } else {
        out += ":\n";
        append_human(out, kv.second, indent + "  ");
      }
    }
  } else if (v.kind() == RVal::Kind::Arr) {
    for (const RVal& item : v.items()) {
      if (is_scalar(item)) {
        out += indent + "- " + scalar_text(item) + "\n";
      } else if (item.kind() == RVal::Kind::Obj) {
        // Inline scalar fields of each entry on one line; nested values
        // follow indented.
        out += indent + "-";
        bool any_nested = false;
        for (const auto& kv : item.fields()) {
          if (is_scalar(kv.second))
            out += " " + kv.first + "=" + scalar_text(kv.second);
          else
            any_nested = true;
        }
        out += "\n";
        if (any_nested) {
          for (const auto& kv : item.fields()) {
            if (is_scalar(kv.second)) continue;
            out += indent + "  " + kv.first;
            if (kv.second.kind() == RVal::Kind::Arr && all_scalars(kv.second)) {
              out += ": [";
              bool first = true;
              for (const RVal& it2 : kv.second.items()) {
                if (!first) out += ", ";
                first = false;
                out += scalar_text(it2);
              }
              out += "]\n";
            } else {
              out += ":\n";
              append_human(out, kv.second, indent + "    ");
            }
          }
        }
      } else {
        append_human(out, item, indent + "  ");
      }
    }
  } else {
    out += indent + scalar_text(v) + "\n";
  }
}

}  // namespace

std::string emit_machine(const Report& report) {
  RVal root = RVal::object();
  root.set("schema_version", RVal(kReportSchemaVersion));
  root.set("engine_version", RVal(kEngineVersion));
  root.set("scenario", RVal(report.scenario));
  RVal tols = RVal::object();
  tols.set("structural", RVal(report.tols.structural));
  tols.set("spectral", RVal(report.tols.spectral));
  tols.set("fd", RVal(report.tols.fd));
  root.set("tolerances", std::move(tols));
  RVal checks = RVal::array();
  for (const CheckRecord& c : report.checks) {
    RVal rec = RVal::object();
    rec.set("name", RVal(c.name));
    rec.set("kind", RVal(c.kind));
    rec.set("pass", RVal(c.pass));
    rec.set("skipped", RVal(c.skipped));
    rec.set("details", c.details);
    checks.push(std::move(rec));
  }
  root.set("checks", std::move(checks));
  root.set("pass", RVal(report.pass));

  std::string out;
  append_json(out, root);
  out += '\n';
  return out;
}

std::string emit_human(const Report& report) {
  std::ostringstream out;
  out << "scenario: " << report.scenario << "\n";
  out << "engine: " << kEngineVersion << "\n";
  out << "tolerances: structural=" << human_number(report.tols.structural)
      << " spectral=" << human_number(report.tols.spectral)
      << " fd=" << human_number(report.tols.fd) << "\n";

  std::size_t passed = 0, ran = 0;
  for (const CheckRecord& c : report.checks) {
    if (c.skipped) continue;
    ++ran;
    if (c.pass) ++passed;
  }

  for (const CheckRecord& c : report.checks) {
    out << "\n" << c.name << " (" << c.kind << "): "
        << (c.skipped ? "SKIPPED" : c.pass ? "PASS" : "FAIL") << "\n";
    std::string body;
    append_human(body, c.details, "  ");
    out << body;
  }

  out << "\noverall: " << (report.pass ? "PASS" : "FAIL") << " (" << passed
      << "/" << ran << " checks passed";
  if (ran != report.checks.size())
    out << ", " << (report.checks.size() - ran) << " skipped";
  out << ")\n";
  return out.str();
}

}  // namespace slantcheck
