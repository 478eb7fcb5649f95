#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace polaronlab::cli {

namespace {

void walk_unknown(const json& node, const std::string& path, const std::set<std::string>& used,
                  std::vector<std::string>& unknown) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string p = path.empty() ? it.key() : path + "." + it.key();
    if (!used.count(p)) {
      unknown.push_back(p);
    } else if (it.value().is_object()) {
      walk_unknown(it.value(), p, used, unknown);
    }
  }
}

json::json_pointer pointer_for(const std::string& dotted) {
  std::string ptr;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) ptr += "/" + part;
  return json::json_pointer(ptr);
}

}  // namespace

Config::Config() : input_(json::object()), resolved_(json::object()) {}

Config Config::parse(const std::string& text) {
  Config c;
  try {
    c.input_ = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!c.input_.is_object()) throw ConfigError("config must be a JSON object");
  return c;
}

Config Config::load(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Section Config::root() { return Section(this, &input_, ""); }

void Config::finish() const {
  std::vector<std::string> unknown;
  walk_unknown(input_, "", consumed_, unknown);
  if (!unknown.empty()) {
    std::string msg = "unknown config key";
    msg += unknown.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", " : "") + unknown[i];
    throw ConfigError(msg);
  }
}

Section::Section(Config* owner, const json* node, std::string path)
    : owner_(owner), node_(node), path_(std::move(path)) {}

std::string Section::where(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

const json* Section::lookup(const std::string& key) {
  if (!node_) return nullptr;
  auto it = node_->find(key);
  if (it == node_->end()) return nullptr;
  owner_->consumed_.insert(where(key));
  return &*it;
}

void Section::record(const std::string& key, const json& value) {
  owner_->resolved_[pointer_for(where(key))] = value;
}

bool Section::has(const std::string& key) const { return node_ && node_->contains(key); }

bool Section::has_object(const std::string& key) const {
  return has(key) && node_->at(key).is_object();
}

double Section::number(const std::string& key, double fallback) {
  double v = fallback;
  if (const json* j = lookup(key)) {
    if (!j->is_number()) throw ConfigError(where(key) + " must be a number");
    v = j->get<double>();
    if (!std::isfinite(v)) throw ConfigError(where(key) + " must be finite");
  }
  record(key, v);
  return v;
}

double Section::number(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key " + where(key));
  return number(key, 0.0);
}

double Section::positive(const std::string& key, double fallback) {
  const double v = number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(where(key) + " must be > 0");
  return v;
}

double Section::non_negative(const std::string& key, double fallback) {
  const double v = number(key, fallback);
  if (!(v >= 0.0)) throw ConfigError(where(key) + " must be >= 0");
  return v;
}

std::size_t Section::count(const std::string& key, std::size_t fallback) {
  std::size_t v = fallback;
  if (const json* j = lookup(key)) {
    if (!j->is_number_unsigned()) throw ConfigError(where(key) + " must be a non-negative integer");
    v = j->get<std::size_t>();
  }
  record(key, v);
  return v;
}

bool Section::flag(const std::string& key, bool fallback) {
  bool v = fallback;
  if (const json* j = lookup(key)) {
    if (!j->is_boolean()) throw ConfigError(where(key) + " must be true or false");
    v = j->get<bool>();
  }
  record(key, v);
  return v;
}

std::string Section::choice(const std::string& key, const std::string& fallback,
                            const std::vector<std::string>& allowed) {
  std::string v = fallback;
  if (const json* j = lookup(key)) {
    if (!j->is_string()) throw ConfigError(where(key) + " must be a string");
    v = j->get<std::string>();
  }
  bool ok = false;
  std::string list;
  for (const auto& a : allowed) {
    ok = ok || a == v;
    list += (list.empty() ? "" : "|") + a;
  }
  if (!ok) throw ConfigError(where(key) + " must be one of " + list);
  record(key, v);
  return v;
}

std::optional<std::string> Section::text(const std::string& key) {
  const json* j = lookup(key);
  if (!j) return std::nullopt;
  if (!j->is_string()) throw ConfigError(where(key) + " must be a string");
  record(key, *j);
  return j->get<std::string>();
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& fallback) {
  std::vector<double> v = fallback;
  if (const json* j = lookup(key)) {
    if (!j->is_array() || j->empty()) throw ConfigError(where(key) + " must be a non-empty list");
    v.clear();
    for (const auto& e : *j) {
      if (!e.is_number()) throw ConfigError(where(key) + " must contain only numbers");
      v.push_back(e.get<double>());
      if (!std::isfinite(v.back())) throw ConfigError(where(key) + " must be finite");
    }
  }
  record(key, v);
  return v;
}

Section Section::child(const std::string& key) {
  const json* j = lookup(key);
  if (j && !j->is_object()) throw ConfigError(where(key) + " must be an object");
  return Section(owner_, j, where(key));
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
  if (n == 0) throw ConfigError("grid count must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? start
                    : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> grid(Section s, const std::string& key, const std::vector<double>& fallback) {
  // a linear grid may be given as {"start", "stop", "count"} instead of a list
  if (s.has_object(key)) {
    Section g = s.child(key);
    const double a = g.number("start");
    const double b = g.number("stop");
    const std::size_t n = g.count("count", 2);
    return linspace(a, b, n);
  }
  return s.numbers(key, fallback);
}

}  // namespace polaronlab::cli
