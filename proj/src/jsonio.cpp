#include "mvcf/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mvcf {

std::string fmt17(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void escape_into(const std::string& s, std::string& out) {
  out.push_back('"');
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
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (static_cast<std::size_t>(depth) + 1),
                         ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        escape_into(it.key(), out);
        out += ": ";
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short scalar arrays stay on one line
      bool scalars = true;
      for (const auto& v : j)
        if (v.is_structured()) scalars = false;
      if (scalars) {
        out += "[";
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(v, indent, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        dump_rec(v, indent, depth + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::string:
      escape_into(j.get_ref<const std::string&>(), out);
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case Json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace

std::string dump_json17(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  out.push_back('\n');
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_atomic: cannot open " + tmp);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write_atomic: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mvcf
