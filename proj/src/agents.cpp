// Copyright 2026 The polymanip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polymanip/agents.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polymanip {

const char* to_string(AgentKind k) {
  switch (k) {
    case AgentKind::MWU: return "mwu";
    case AgentKind::LMWU: return "lmwu";
    case AgentKind::FTRL: return "ftrl";
    case AgentKind::FTL: return "ftl";
    case AgentKind::Constant: return "constant";
  }
  return "?";
}

namespace {

double parse_number(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("bad agent parameter in '" + whole + "'");
  }
  return v;
}

}  // namespace

AgentSpec parse_agent_spec(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto colon = lower.find(':');
  const std::string name = lower.substr(0, colon);
  const std::string param = colon == std::string::npos ? "" : lower.substr(colon + 1);

  AgentSpec spec;
  bool found = false;
  for (auto k : {AgentKind::MWU, AgentKind::LMWU, AgentKind::FTRL, AgentKind::FTL,
                 AgentKind::Constant}) {
    if (name == to_string(k)) {
      spec.kind = k;
      found = true;
    }
  }
  if (!found) {
    throw std::invalid_argument("unknown agent '" + text + "' (mwu, ftrl, lmwu, ftl, constant)");
  }
  if (param.empty()) {
    if (spec.kind == AgentKind::Constant) {
      throw std::invalid_argument("constant agent needs an action: constant:<index>");
    }
    return spec;
  }
  switch (spec.kind) {
    case AgentKind::MWU:
    case AgentKind::FTRL:
      spec.eta = param == "fast" ? kFastRate : parse_number(param, text);
      break;
    case AgentKind::LMWU:
      spec.eta = param == "slow" ? kSlowRate : parse_number(param, text);
      break;
    case AgentKind::FTL:
      throw std::invalid_argument("ftl takes no parameter");
    case AgentKind::Constant: {
      const double a = parse_number(param, text);
      if (a < 0 || a != std::floor(a)) throw std::invalid_argument("bad constant action in '" + text + "'");
      spec.constant_action = static_cast<Index>(a);
      break;
    }
  }
  if (spec.eta && *spec.eta < 0) throw std::invalid_argument("learning rate must be >= 0");
  return spec;
}

std::string format_agent_spec(const AgentSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.kind);
  if (spec.kind == AgentKind::Constant) {
    os << ":" << spec.constant_action;
  } else if (spec.eta) {
    // Shortest text that reads back to the same double.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, *spec.eta);
    os << ":" << std::string(buf, res.ptr);
  }
  return os.str();
}

double default_learning_rate(AgentKind kind, Index num_actions, Index horizon) {
  switch (kind) {
    case AgentKind::MWU:
    case AgentKind::FTRL:
      return std::sqrt(8.0 * std::log(static_cast<double>(num_actions)) /
                       static_cast<double>(std::max<Index>(horizon, 1)));
    case AgentKind::LMWU:
      return 0.01;
    default:
      return 0.0;
  }
}

double PayoffScale::apply(double v) const {
  if (!(hi > lo)) return 0.0;
  return 2.0 * (v - lo) / (hi - lo) - 1.0;
}

VectorXd PayoffScale::apply(const VectorXd& v) const {
  if (!(hi > lo)) return VectorXd::Zero(v.size());
  return ((v.array() - lo) * (2.0 / (hi - lo)) - 1.0).matrix();
}

Agent::Agent(const AgentSpec& spec, Index num_actions, Index horizon, PayoffScale scale)
    : kind_(spec.kind), num_actions_(num_actions), scale_(scale) {
  if (num_actions < 1) throw std::invalid_argument("agent needs at least one action");
  eta_ = spec.eta.value_or(default_learning_rate(kind_, num_actions, horizon));
  if (!std::isfinite(eta_) || eta_ < 0) throw std::invalid_argument("learning rate must be >= 0");
  if (kind_ == AgentKind::Constant) {
    if (spec.constant_action < 0 || spec.constant_action >= num_actions) {
      throw std::out_of_range("constant agent action out of range");
    }
    constant_action_ = spec.constant_action;
  }
  cumulative_ = VectorXd::Zero(num_actions);
  log_weights_ = VectorXd::Zero(num_actions);
  weights_ = VectorXd::Constant(num_actions, 1.0 / static_cast<double>(num_actions));
}

namespace {

// exp(s - max s), normalized.
VectorXd softmax(const VectorXd& s) {
  VectorXd e = (s.array() - s.maxCoeff()).exp().matrix();
  return e / e.sum();
}

}  // namespace

MixedStrategy Agent::act() const {
  switch (kind_) {
    case AgentKind::MWU:
      return MixedStrategy(softmax(log_weights_));
    case AgentKind::FTRL:
      return MixedStrategy(softmax(eta_ * cumulative_));
    case AgentKind::LMWU:
      return MixedStrategy(weights_ / weights_.sum());
    case AgentKind::FTL: {
      Index best = 0;
      for (Index a = 1; a < num_actions_; ++a) {
        if (cumulative_(a) > cumulative_(best)) best = a;
      }
      return MixedStrategy::pure(num_actions_, best);
    }
    case AgentKind::Constant:
      return MixedStrategy::pure(num_actions_, constant_action_);
  }
  throw std::logic_error("unknown agent kind");
}

void Agent::update(const VectorXd& counterfactual) {
  if (counterfactual.size() != num_actions_) {
    throw std::invalid_argument("feedback length does not match the action count");
  }
  if (!counterfactual.allFinite()) throw std::invalid_argument("feedback must be finite");
  VectorXd s = scale_.apply(counterfactual);
  cumulative_ += s;
  switch (kind_) {
    case AgentKind::MWU:
      log_weights_ += eta_ * s;
      break;
    case AgentKind::LMWU: {
      constexpr double kRoundoff = 1e-12;
      if ((s.array().abs() > 1.0 + kRoundoff).any()) {
        throw std::domain_error("LMWU payoff outside [-1, 1] after scaling");
      }
      s = s.cwiseMax(-1.0).cwiseMin(1.0);
      weights_.array() *= (1.0 + eta_ * s.array());
      if ((weights_.array() <= 0).any()) {
        throw std::domain_error("LMWU weight became nonpositive; learning rate too large");
      }
      weights_ /= weights_.sum();
      break;
    }
    default:
      break;
  }
  ++round_;
}

RegretLedger::RegretLedger(Index num_actions) : totals_(VectorXd::Zero(num_actions)) {}

void RegretLedger::record(const MixedStrategy& played, const VectorXd& counterfactual) {
  if (played.size() != totals_.size() || counterfactual.size() != totals_.size()) {
    throw std::invalid_argument("ledger entry has the wrong length");
  }
  totals_ += counterfactual;
  realized_ += played.probs().dot(counterfactual);
  ++rounds_;
}

double average_regret(const RegretLedger& ledger, Index horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  return (ledger.counterfactual_totals().maxCoeff() - ledger.realized_total()) /
         static_cast<double>(horizon);
}

double average_regret(const RegretLedger& ledger) {
  return average_regret(ledger, ledger.rounds());
}

}  // namespace polymanip
