#pragma once

#include <filesystem>
#include <string>

#include "ehcr/chain.hpp"
#include "ehcr/system_model.hpp"

namespace ehcr {

/// Parses a parameter document. Keys: P_p, sigma_n2, T, W, b_p, b_s, rho,
/// eta, E_u, E_t, e_proc, f_s (optional, defaults to W), lambda_e, N_max,
/// mu_th and links.{p,pst,ps,s,sp}.{fading_mean,distance[,path_loss_exponent]}.
/// Throws ConfigError on malformed input or inadmissible values.
SystemParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const SystemParams& params);
SystemParams load_params(const std::filesystem::path& path);

/// Policy document with keys alpha, beta1, beta2, tau, lambda.
Policy policy_from_json_text(const std::string& text);
std::string policy_to_json_text(const Policy& policy);
Policy load_policy(const std::filesystem::path& path);

}  // namespace ehcr
