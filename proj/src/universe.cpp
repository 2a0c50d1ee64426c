#include "posmod/universe.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "posmod/canonical.hpp"
#include "posmod/parallel.hpp"
#include "posmod/semantics.hpp"

namespace posmod {

ModelUniverse::ModelUniverse(Theory theory, int bound, std::vector<FiniteStructure> members)
    : theory_(std::move(theory)), bound_(bound), members_(std::move(members)) {
  if (bound_ < 1) throw std::invalid_argument("universe bound must be at least 1");
  codes_.reserve(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const FiniteStructure& m = members_[i];
    if (m.signature() != theory_.signature()) throw SignatureMismatch("member signature differs from the theory's");
    if (m.size() > bound_) throw std::invalid_argument("member larger than the universe bound");
    if (labeled_code(m) != canonical_labeling(m).code) throw std::invalid_argument("member is not canonical");
    codes_.push_back(canonical_form(m));
    if (i > 0) {
      const auto& prev = members_[i - 1];
      bool ordered = prev.size() < m.size() || (prev.size() == m.size() && codes_[i - 1] < codes_[i]);
      if (!ordered) throw std::invalid_argument("members are not sorted by (size, code) or repeat");
    }
    if (!satisfies(m, theory_).holds) throw std::invalid_argument("member is not a model of the theory");
  }
  pc_.assign(members_.size(), -1);
  hmax_.assign(members_.size(), -1);
}

ModelUniverse::ModelUniverse(const ModelUniverse& other)
    : theory_(other.theory_), bound_(other.bound_), members_(other.members_), codes_(other.codes_) {
  std::lock_guard lock(other.mutex_);
  pc_ = other.pc_;
  hmax_ = other.hmax_;
}

ModelUniverse& ModelUniverse::operator=(const ModelUniverse& other) {
  if (this == &other) return *this;
  theory_ = other.theory_;
  bound_ = other.bound_;
  members_ = other.members_;
  codes_ = other.codes_;
  std::scoped_lock lock(mutex_, other.mutex_);
  pc_ = other.pc_;
  hmax_ = other.hmax_;
  return *this;
}

std::optional<std::size_t> ModelUniverse::index_of(const FiniteStructure& s) const {
  if (s.signature() != theory_.signature() || s.size() > bound_) return std::nullopt;
  std::string code = canonical_form(s);
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code, [&](const std::string& a, const std::string& b) {
    // codes start with "<size>:"; compare by size first to follow member order
    int sa = std::stoi(a);
    int sb = std::stoi(b);
    return sa != sb ? sa < sb : a < b;
  });
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::optional<bool> ModelUniverse::flag(Flag which, std::size_t i) const {
  std::lock_guard lock(mutex_);
  signed char v = (which == Flag::Pc ? pc_ : hmax_).at(i);
  if (v < 0) return std::nullopt;
  return v == 1;
}

void ModelUniverse::set_flag(Flag which, std::size_t i, bool value) const {
  std::lock_guard lock(mutex_);
  (which == Flag::Pc ? pc_ : hmax_).at(i) = value ? 1 : 0;
}

ModelUniverse enumerate_models(const Theory& t, int n, const FinderOptions& opt) {
  if (n < 1) throw std::invalid_argument("universe bound must be at least 1");
  std::vector<std::vector<FiniteStructure>> by_size(static_cast<std::size_t>(n));
  // larger sizes dominate the cost, so hand them out first
  parallel_for(by_size.size(), [&](std::size_t k) {
    std::size_t idx = by_size.size() - 1 - k;
    by_size[idx] = find_models(t, static_cast<int>(idx) + 1, opt);
  });
  std::vector<FiniteStructure> members;
  for (auto& v : by_size)
    for (auto& m : v) members.push_back(std::move(m));
  return ModelUniverse(t, n, std::move(members));
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string member_file(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%04zu.pms", i);
  return buf;
}

nlohmann::json flag_json(std::optional<bool> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

void save_universe(const ModelUniverse& u, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "posmod-universe";
  manifest["version"] = kUniverseFormatVersion;
  manifest["theory"] = u.theory().name();
  manifest["theory_hash"] = hex64(theory_hash(u.theory()));
  manifest["bound"] = u.bound();
  nlohmann::json members = nlohmann::json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::ofstream out(dir / member_file(i));
    out << serialize(u[i]) << "\n";
    if (!out) throw std::runtime_error("cannot write " + (dir / member_file(i)).string());
    members.push_back({{"file", member_file(i)},
                       {"code", u.code(i)},
                       {"pc", flag_json(u.flag(ModelUniverse::Flag::Pc, i))},
                       {"hmax", flag_json(u.flag(ModelUniverse::Flag::HMax, i))}});
  }
  manifest["members"] = members;
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
}

std::optional<ModelUniverse> load_universe(const std::filesystem::path& dir, const Theory& t, int bound) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return std::nullopt;
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt universe manifest: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "posmod-universe" || manifest.value("version", 0) != kUniverseFormatVersion ||
      manifest.value("theory_hash", "") != hex64(theory_hash(t)) || manifest.value("bound", 0) != bound) {
    return std::nullopt;
  }
  try {
    std::vector<FiniteStructure> members;
    std::vector<std::pair<std::optional<bool>, std::optional<bool>>> flags;
    for (const auto& m : manifest.at("members")) {
      std::ifstream f(dir / m.at("file").get<std::string>());
      if (!f) throw std::runtime_error("missing member file " + m.at("file").get<std::string>());
      std::stringstream ss;
      ss << f.rdbuf();
      members.push_back(parse_structure(ss.str(), t.signature()));
      auto read = [&](const char* key) -> std::optional<bool> {
        if (!m.contains(key) || m.at(key).is_null()) return std::nullopt;
        return m.at(key).get<bool>();
      };
      flags.emplace_back(read("pc"), read("hmax"));
    }
    ModelUniverse u(t, bound, std::move(members));
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i].first) u.set_flag(ModelUniverse::Flag::Pc, i, *flags[i].first);
      if (flags[i].second) u.set_flag(ModelUniverse::Flag::HMax, i, *flags[i].second);
    }
    return u;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt universe manifest: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("corrupt universe: " + std::string(e.what()));
  }
}

}  // namespace posmod
