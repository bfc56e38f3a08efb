#include "bazykin/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bazykin {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw precondition_error("config: '" + key + "' is not a number: " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  int x = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw precondition_error("config: '" + key + "' is not an integer: " + value);
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw precondition_error("config: '" + key + "' is not an unsigned integer: " + value);
  return x;
}

}  // namespace

void RangeSpec::validate(const char* name) const {
  if (!(min > 0.0 && max > min))
    throw precondition_error(std::string("config: ") + name + " needs 0 < min < max");
  if (count < 2) throw precondition_error(std::string("config: ") + name + " needs count >= 2");
}

void Config::validate() const {
  params.validate();
  range_a.validate("range_a");
  range_c.validate("range_c");
  if (max_attempts < 1) throw precondition_error("config: max_attempts must be >= 1");
  if (workers < 1) throw precondition_error("config: workers must be >= 1");
  if (!(branch_s_max > 0.0 && branch_s_max <= 0.5))
    throw precondition_error("config: branch s_max must lie in (0, 0.5]");
  if (branch_steps < 4) throw precondition_error("config: branch steps must be >= 4");
  grid.make();  // throws on a bad grid spec
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw precondition_error("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw precondition_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "grid.kind") {
      if (value == "interval") cfg.grid.kind = GridKind::interval;
      else if (value == "rectangle") cfg.grid.kind = GridKind::rectangle;
      else throw precondition_error("config: grid.kind must be interval or rectangle");
    } else if (qual == "grid.lx" || qual == "grid.length") {
      cfg.grid.lx = parse_double(qual, value);
    } else if (qual == "grid.ly") {
      cfg.grid.ly = parse_double(qual, value);
    } else if (qual == "grid.nx" || qual == "grid.n") {
      cfg.grid.nx = parse_int(qual, value);
    } else if (qual == "grid.ny") {
      cfg.grid.ny = parse_int(qual, value);
    } else if (qual == "params.a") {
      cfg.params.a = parse_double(qual, value);
    } else if (qual == "params.b") {
      cfg.params.b = parse_double(qual, value);
    } else if (qual == "params.c") {
      cfg.params.c = parse_double(qual, value);
    } else if (qual == "params.d") {
      cfg.params.d = parse_double(qual, value);
    } else if (qual == "params.alpha") {
      cfg.params.alpha = parse_double(qual, value);
    } else if (qual == "params.beta") {
      cfg.params.beta = parse_double(qual, value);
    } else if (qual == "range_a.min") {
      cfg.range_a.min = parse_double(qual, value);
    } else if (qual == "range_a.max") {
      cfg.range_a.max = parse_double(qual, value);
    } else if (qual == "range_a.count") {
      cfg.range_a.count = parse_int(qual, value);
    } else if (qual == "range_c.min") {
      cfg.range_c.min = parse_double(qual, value);
    } else if (qual == "range_c.max") {
      cfg.range_c.max = parse_double(qual, value);
    } else if (qual == "range_c.count") {
      cfg.range_c.count = parse_int(qual, value);
    } else if (qual == "solver.max_attempts") {
      cfg.max_attempts = parse_int(qual, value);
    } else if (qual == "solver.seed") {
      cfg.seed = parse_u64(qual, value);
    } else if (qual == "solver.workers") {
      cfg.workers = parse_int(qual, value);
    } else if (qual == "branch.which") {
      if (value == "a") cfg.branch_which = BranchKind::a_branch;
      else if (value == "c") cfg.branch_which = BranchKind::c_branch;
      else throw precondition_error("config: branch.which must be a or c");
    } else if (qual == "branch.s_max") {
      cfg.branch_s_max = parse_double(qual, value);
    } else if (qual == "branch.steps") {
      cfg.branch_steps = parse_int(qual, value);
    } else if (qual == "verify.eps") {
      cfg.verify_eps = parse_double(qual, value);
    } else if (qual == "output.dir") {
      cfg.out_dir = value;
    } else {
      throw precondition_error("config line " + std::to_string(lineno) + ": unknown key '" +
                               qual + "'");
    }
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bazykin
