#include "bazykin/output.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

namespace bazykin {

std::string format_double(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, p);
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string{};
}

std::string field_csv(const ScalarField& field) {
  const Grid& g = field.grid();
  std::string out;
  if (g.kind() == GridKind::interval) {
    out += "index,x,value\n";
    for (int i = 0; i < field.size(); ++i) {
      out += std::to_string(i);
      out += ',';
      out += format_double(g.x(i));
      out += ',';
      out += format_double(field[i]);
      out += '\n';
    }
  } else {
    out += "index,x,y,value\n";
    for (int i = 0; i < field.size(); ++i) {
      out += std::to_string(i);
      out += ',';
      out += format_double(g.x(i));
      out += ',';
      out += format_double(g.y(i));
      out += ',';
      out += format_double(field[i]);
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw precondition_error("cannot write file: " + path);
  out << content;
}

}  // namespace bazykin
