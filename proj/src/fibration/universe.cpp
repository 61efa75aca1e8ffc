#include <algorithm>
#include <fstream>

#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib {

void ProbeUniverse::finish() {
  for (const auto& r : objs1) {
    objs0.push_back(r.dom());
    objs0.push_back(r.cod());
  }
  std::sort(objs0.begin(), objs0.end());
  objs0.erase(std::unique(objs0.begin(), objs0.end()), objs0.end());
  for (const auto& a : objs0) objs1.push_back(fm::eq(a));
  for (const auto& q : objs2)
    for (auto f : cube::kFaces2) objs1.push_back(q.edge(f));
  for (const auto& r : objs1)
    if (!std::binary_search(objs0.begin(), objs0.end(), r.dom()) || !std::binary_search(objs0.begin(), objs0.end(), r.cod())) {
      objs0.push_back(r.dom());
      objs0.push_back(r.cod());
    }
  std::sort(objs0.begin(), objs0.end());
  objs0.erase(std::unique(objs0.begin(), objs0.end()), objs0.end());
  std::sort(objs1.begin(), objs1.end());
  objs1.erase(std::unique(objs1.begin(), objs1.end()), objs1.end());

  idx0_.clear();
  idx1_.clear();
  for (std::size_t i = 0; i < objs0.size(); ++i) idx0_.emplace(objs0[i], i);
  for (std::size_t i = 0; i < objs1.size(); ++i) idx1_.emplace(objs1[i], i);
  isos0_.clear();
  if (policy == Policy::Crey)
    for (std::size_t i = 0; i < objs0.size(); ++i)
      for (std::size_t j = 0; j < objs0.size(); ++j)
        if (objs0[i].size() == objs0[j].size())
          for (auto& f : fm::all_bijections(objs0[i], objs0[j]))
            if (!f.is_identity()) isos0_.emplace_back(i, std::move(f));
}

std::optional<std::size_t> ProbeUniverse::index0(const FinSet& a) const {
  auto it = idx0_.find(a);
  if (it == idx0_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ProbeUniverse::index1(const Rel& r) const {
  auto it = idx1_.find(r);
  if (it == idx1_.end()) return std::nullopt;
  return it->second;
}

std::string ProbeUniverse::summary() const {
  std::string s = name + " (" + fm::to_string(policy) + "): " + std::to_string(objs0.size()) + " objects, " +
                  std::to_string(objs1.size()) + " relations";
  if (!objs2.empty()) s += ", " + std::to_string(objs2.size()) + " 2-relations";
  return s;
}

ProbeUniverse default_universe(Policy p) {
  ProbeUniverse u;
  u.name = "default";
  u.policy = p;
  FinSet one = FinSet::atoms(1), two = FinSet::atoms(2);
  Label a0 = Label::atom(0), a1 = Label::atom(1);
  u.objs0 = {one, two};
  u.objs1 = {
      fm::eq(one),
      fm::eq(two),
      Rel::from_pairs(one, two, {{a0, a0}}),
      Rel::from_pairs(one, two, {{a0, a1}}),
      Rel::from_pairs(two, one, {{a0, a0}}),
      Rel::from_pairs(two, two, {{a1, a1}}),
      Rel::from_pairs(two, two, {{a0, a1}, {a1, a0}}),
      Rel::from_pairs(two, two, {{a0, a0}}),
      Rel::from_pairs(two, two, {{a0, a0}, {a1, a0}, {a1, a1}}),
  };
  u.finish();
  return u;
}

ProbeUniverse universe_upto(int max_size, Policy p) {
  if (max_size < 1) throw ModelError("probe carriers need at least one element");
  ProbeUniverse u;
  u.name = "upto" + std::to_string(max_size);
  u.policy = p;
  for (int k = 1; k <= max_size; ++k) u.objs0.push_back(FinSet::atoms(k));
  for (const auto& a : u.objs0)
    for (const auto& b : u.objs0)
      for (auto& r : fm::all_prop_relations(a, b)) u.objs1.push_back(std::move(r));
  u.finish();
  return u;
}

nlohmann::json to_json(const ProbeUniverse& u) {
  nlohmann::json j;
  j["name"] = u.name;
  j["policy"] = fm::to_string(u.policy);
  j["objects"] = nlohmann::json::array();
  for (const auto& a : u.objs0) j["objects"].push_back(fm::to_json(a));
  j["relations"] = nlohmann::json::array();
  for (const auto& r : u.objs1) j["relations"].push_back(fm::to_json(r));
  if (!u.objs2.empty()) {
    j["tworels"] = nlohmann::json::array();
    for (const auto& q : u.objs2) j["tworels"].push_back(cube::to_json(q));
  }
  return j;
}

ProbeUniverse universe_from_json(const nlohmann::json& j) {
  ProbeUniverse u;
  u.name = j.value("name", std::string("custom"));
  u.policy = fm::parse_policy(j.value("policy", std::string("rey")));
  if (j.contains("objects"))
    for (const auto& a : j.at("objects")) u.objs0.push_back(fm::finset_from_json(a));
  if (j.contains("relations"))
    for (const auto& r : j.at("relations")) u.objs1.push_back(fm::rel_from_json(r));
  if (j.contains("tworels"))
    for (const auto& q : j.at("tworels")) u.objs2.push_back(cube::tworel_from_json(q));
  if (u.objs0.empty() && u.objs1.empty()) throw ModelError("probe universe has no objects");
  u.finish();
  return u;
}

ProbeUniverse load_universe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open universe file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("universe file " + path + ": " + e.what());
  }
  return universe_from_json(j);
}

}  // namespace pwb::fib
