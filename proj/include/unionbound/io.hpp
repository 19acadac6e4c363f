#pragma once

#include "unionbound/core.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace unionbound {

// An instance file holds either a full event system ("atoms") or just the
// pairwise information ("moments"). The exact union probability is only
// available for the former.
using ParsedInstance = std::variant<EventSystem<double>, MomentSummary<double>>;

inline nlohmann::json to_json(const EventSystem<double>& es) {
  nlohmann::json j;
  j["type"] = "atoms";
  j["masses"] = std::vector<double>(es.atom_masses.begin(), es.atom_masses.end());
  nlohmann::json memb = nlohmann::json::array();
  for (Eigen::Index i = 0; i < es.event_count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index w = 0; w < es.atom_count(); ++w)
      row.push_back(es.membership(i, w));
    memb.push_back(std::move(row));
  }
  j["membership"] = std::move(memb);
  return j;
}

inline nlohmann::json to_json(const MomentSummary<double>& ms) {
  nlohmann::json j;
  j["type"] = "moments";
  j["alpha"] = std::vector<double>(ms.alpha.begin(), ms.alpha.end());
  nlohmann::json sigma = nlohmann::json::array();
  for (Eigen::Index i = 0; i < ms.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < ms.size(); ++k) row.push_back(ms.sigma(i, k));
    sigma.push_back(std::move(row));
  }
  j["sigma"] = std::move(sigma);
  return j;
}

namespace detail {

// Structural problems (wrong shapes, missing keys, bad element types) are
// parse errors; value-level problems surface from the type constructors as
// std::invalid_argument.
inline std::runtime_error parse_error(const std::string& what) {
  return std::runtime_error("parse error: " + what);
}

inline Eigen::VectorXd parse_number_vector(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw parse_error(std::string(key) + " must be an array");
  Eigen::VectorXd v(j.size());
  Eigen::Index at = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw parse_error(std::string(key) + " entries must be numbers");
    v[at++] = x.get<double>();
  }
  return v;
}

}  // namespace detail

inline ParsedInstance parse_instance_json(const nlohmann::json& j) {
  if (!j.is_object()) throw detail::parse_error("instance must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string())
    throw detail::parse_error("instance needs a string 'type' field");
  const std::string type = j["type"].get<std::string>();
  if (type == "atoms") {
    if (!j.contains("masses") || !j.contains("membership"))
      throw detail::parse_error("atoms instance needs 'masses' and 'membership'");
    Eigen::VectorXd masses = detail::parse_number_vector(j["masses"], "masses");
    const auto& jm = j["membership"];
    if (!jm.is_array() || jm.empty())
      throw detail::parse_error("membership must be a non-empty array of rows");
    BoolMatrix memb(static_cast<Eigen::Index>(jm.size()), masses.size());
    Eigen::Index i = 0;
    for (const auto& row : jm) {
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != masses.size())
        throw detail::parse_error("membership rows must match the number of masses");
      Eigen::Index w = 0;
      for (const auto& x : row) {
        if (x.is_boolean())
          memb(i, w) = x.get<bool>();
        else if (x.is_number_integer())
          memb(i, w) = x.get<long>() != 0;
        else
          throw detail::parse_error("membership entries must be booleans or 0/1");
        ++w;
      }
      ++i;
    }
    return EventSystem<double>(std::move(masses), std::move(memb));
  }
  if (type == "moments") {
    if (!j.contains("alpha") || !j.contains("sigma"))
      throw detail::parse_error("moments instance needs 'alpha' and 'sigma'");
    Eigen::VectorXd alpha = detail::parse_number_vector(j["alpha"], "alpha");
    const auto& js = j["sigma"];
    if (!js.is_array() || static_cast<Eigen::Index>(js.size()) != alpha.size())
      throw detail::parse_error("sigma must have one row per alpha entry");
    Eigen::MatrixXd sigma(alpha.size(), alpha.size());
    Eigen::Index i = 0;
    for (const auto& row : js) {
      Eigen::VectorXd r = detail::parse_number_vector(row, "sigma rows");
      if (r.size() != alpha.size())
        throw detail::parse_error("sigma rows must match the number of events");
      sigma.row(i++) = r.transpose();
    }
    return make_moment_summary<double>(std::move(alpha), std::move(sigma));
  }
  throw detail::parse_error("unknown instance type '" + type + "'");
}

inline ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw detail::parse_error(std::string(e.what()));
  }
  return parse_instance_json(j);
}

}  // namespace unionbound
