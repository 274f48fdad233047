#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "instance.hpp"

namespace lamatch {

struct Diagnostic {
  std::string message;
  int line = 0;  // source line when produced by the parser, 0 otherwise

  std::string to_string() const {
    return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
  }
};

inline bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#' || c == '(' || c == ')' ||
           c == ';' || c == ':';
  });
}

/// Every structural problem with an instance. Empty result means valid.
/// Identical class sets on one vertex are not reported: they are merged when
/// the classification tree is built.
inline std::vector<Diagnostic> validate(const Instance& instance) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string msg) { out.push_back(Diagnostic{std::move(msg), 0}); };

  std::set<std::string> applicant_names;
  for (const Vertex& v : instance.applicants()) {
    if (!is_valid_name(v.name)) report("invalid name: '" + v.name + "'");
    if (!applicant_names.insert(v.name).second) report("duplicate applicant name: " + v.name);
    if (v.quota <= 0) report("quota must be positive: applicant " + v.name);
  }
  std::set<std::string> post_names;
  for (const Vertex& v : instance.posts()) {
    if (!is_valid_name(v.name)) report("invalid name: '" + v.name + "'");
    if (!post_names.insert(v.name).second) report("duplicate post name: " + v.name);
    if (v.quota <= 0) report("quota must be positive: post " + v.name);
    if (applicant_names.count(v.name)) report("name used for both an applicant and a post: " + v.name);
  }

  for (int a = 0; a < instance.applicant_count(); ++a) {
    const auto& groups = instance.preferences(a);
    const std::string& name = instance.applicant(a).name;
    if (groups.empty()) report("empty preference list: " + name);
    std::set<int> seen;
    for (const auto& group : groups) {
      if (group.empty()) report("empty preference group: " + name);
      for (int p : group) {
        if (p < 0 || p >= instance.post_count()) {
          report("unknown post in preference list of " + name);
        } else if (!seen.insert(p).second) {
          report("duplicate edge: " + name + " ranks " + instance.post(p).name + " more than once");
        }
      }
    }
  }

  for (const ClassDef& c : instance.classes()) {
    if (c.owner < 0 || c.owner >= instance.count(c.owner_side)) {
      report("class owner out of range");
      continue;
    }
    const std::string& owner = instance.vertex(c.owner_side, c.owner).name;
    if (c.quota <= 0) report("quota must be positive: class of " + owner);
    if (c.members.empty()) report("empty class of " + owner);
    const auto& nbrs = instance.neighbors(c.owner_side, c.owner);
    for (int w : c.members) {
      Side other = opposite(c.owner_side);
      if (w < 0 || w >= instance.count(other)) {
        report("unknown class member of " + owner);
      } else if (std::find(nbrs.begin(), nbrs.end(), w) == nbrs.end()) {
        report("class member not a neighbor: " + instance.vertex(other, w).name + " in class of " + owner);
      }
    }
  }
  return out;
}

inline void require_valid(const Instance& instance) {
  auto diags = validate(instance);
  if (!diags.empty()) {
    std::string msg = diags.front().message;
    if (diags.size() > 1) msg += " (and " + std::to_string(diags.size() - 1) + " more)";
    throw Error(ErrorKind::invalid_instance, msg);
  }
}

}  // namespace lamatch
