#include "ehcr/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ehcr/error.hpp"

namespace ehcr {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

LinkParams link_from(const json& links, const char* name) {
  if (!links.contains(name) || !links.at(name).is_object()) {
    throw ConfigError(std::string("missing object 'links.") + name + "'");
  }
  const json& l = links.at(name);
  LinkParams p;
  p.fading_mean = number(l, "fading_mean");
  p.distance = number(l, "distance");
  if (l.contains("path_loss_exponent")) p.path_loss_exponent = number(l, "path_loss_exponent");
  return p;
}

json link_to(const LinkParams& p) {
  json j = {{"fading_mean", p.fading_mean}, {"distance", p.distance}};
  if (p.path_loss_exponent != 2.0) j["path_loss_exponent"] = p.path_loss_exponent;
  return j;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

SystemParams params_from_json_text(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  SystemParams p;
  p.pu_power = number(j, "P_p");
  p.noise_power = number(j, "sigma_n2");
  p.slot = number(j, "T");
  p.bandwidth = number(j, "W");
  p.pu_packet_bits = number(j, "b_p");
  p.su_packet_bits = number(j, "b_s");
  p.pu_activity = number(j, "rho");
  p.rf_efficiency = number(j, "eta");
  p.packet_energy = number(j, "E_u");
  p.transmit_energy = number(j, "E_t");
  p.sample_energy = number(j, "e_proc");
  p.sampling_rate = j.contains("f_s") ? number(j, "f_s") : p.bandwidth;
  p.nature_rate = number(j, "lambda_e");
  const double n_max = number(j, "N_max");
  if (n_max != static_cast<double>(static_cast<int>(n_max))) throw ConfigError("N_max must be an integer");
  p.battery_capacity = static_cast<int>(n_max);
  p.qos_floor = number(j, "mu_th");
  if (!j.contains("links") || !j.at("links").is_object()) throw ConfigError("missing object 'links'");
  const json& links = j.at("links");
  p.links.p = link_from(links, "p");
  p.links.pst = link_from(links, "pst");
  p.links.ps = link_from(links, "ps");
  p.links.s = link_from(links, "s");
  p.links.sp = link_from(links, "sp");

  const auto problems = validate(p);
  if (!problems.empty()) {
    std::string msg = "inadmissible parameters:";
    for (const auto& s : problems) msg += " " + s + ";";
    throw ConfigError(msg);
  }
  return p;
}

std::string params_to_json_text(const SystemParams& p) {
  json j = {{"P_p", p.pu_power},
            {"sigma_n2", p.noise_power},
            {"T", p.slot},
            {"W", p.bandwidth},
            {"b_p", p.pu_packet_bits},
            {"b_s", p.su_packet_bits},
            {"rho", p.pu_activity},
            {"eta", p.rf_efficiency},
            {"E_u", p.packet_energy},
            {"E_t", p.transmit_energy},
            {"e_proc", p.sample_energy},
            {"f_s", p.sampling_rate},
            {"lambda_e", p.nature_rate},
            {"N_max", p.battery_capacity},
            {"mu_th", p.qos_floor}};
  j["links"] = {{"p", link_to(p.links.p)},
                {"pst", link_to(p.links.pst)},
                {"ps", link_to(p.links.ps)},
                {"s", link_to(p.links.s)},
                {"sp", link_to(p.links.sp)}};
  return j.dump(2);
}

SystemParams load_params(const std::filesystem::path& path) { return params_from_json_text(read_file(path)); }

Policy policy_from_json_text(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("policy must be a JSON object");
  Policy p;
  p.alpha = number_array(j, "alpha");
  p.beta1 = number_array(j, "beta1");
  p.beta2 = number_array(j, "beta2");
  p.sensing_time = number(j, "tau");
  p.threshold = number(j, "lambda");
  return p;
}

std::string policy_to_json_text(const Policy& p) {
  const json j = {{"alpha", p.alpha}, {"beta1", p.beta1}, {"beta2", p.beta2}, {"tau", p.sensing_time},
                  {"lambda", p.threshold}};
  return j.dump(2);
}

Policy load_policy(const std::filesystem::path& path) { return policy_from_json_text(read_file(path)); }

}  // namespace ehcr
