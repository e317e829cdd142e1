// Copyright 2026 The dual-reward Authors.
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

#include "dual_reward/serialization.h"

#include <fstream>
#include <memory>
#include <utility>

#include "dual_reward/errors.h"

namespace dual_reward {
namespace {

using nlohmann::json;

json VectorToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(VectorToJson(m.row(r).transpose()));
  }
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgumentError("empty matrix");
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = VectorFromJson(j[r]);
    if (row.size() != cols) throw InvalidArgumentError("ragged matrix");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

}  // namespace

json EnvironmentToJson(const SimEnvironment& env) {
  json j;
  j["schema"] = kEnvironmentSchema;
  j["d"] = env.theta_star.dim();
  j["theta_star"] = VectorToJson(env.theta_star.theta);
  j["c_theta"] = env.theta_star.bound_c_theta;
  j["c_beta"] = env.teachers.bound_c_beta();
  j["c_phi"] = env.c_phi;
  j["oracle_seed"] = env.oracle_seed;
  json pool = json::array();
  for (const FeatureDiff& z : env.pool) {
    pool.push_back({{"id", z.source_id},
                    {"category", z.category},
                    {"z", VectorToJson(z.z)}});
  }
  j["pool"] = std::move(pool);
  j["teachers"] = MatrixToJson(env.teachers.betas());
  json contexts = json::array();
  for (const Eigen::MatrixXd& actions : env.problem.contexts) {
    contexts.push_back(MatrixToJson(actions));
  }
  j["eval_contexts"] = std::move(contexts);
  j["eval_weights"] = VectorToJson(env.problem.weights);
  return j;
}

SimEnvironment EnvironmentFromJson(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kEnvironmentSchema) {
      throw InvalidArgumentError("unsupported environment schema");
    }
    SimEnvironment env;
    env.theta_star = RewardParams(VectorFromJson(j.at("theta_star")),
                                  j.at("c_theta").get<double>());
    env.teachers = TeacherPool(MatrixFromJson(j.at("teachers")),
                               j.at("c_beta").get<double>());
    env.c_phi = j.at("c_phi").get<double>();
    env.oracle_seed = j.at("oracle_seed").get<std::uint64_t>();
    const int d = j.at("d").get<int>();
    for (const json& entry : j.at("pool")) {
      FeatureDiff z{VectorFromJson(entry.at("z")),
                    entry.at("category").get<int>(),
                    entry.at("id").get<std::int64_t>()};
      if (z.z.size() != d) throw InvalidArgumentError("pool entry has wrong d");
      env.pool.push_back(std::move(z));
    }
    for (const json& actions : j.at("eval_contexts")) {
      env.problem.contexts.push_back(MatrixFromJson(actions));
    }
    env.problem.weights = VectorFromJson(j.at("eval_weights"));
    env.problem.Validate();
    return env;
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("malformed environment: ") +
                               e.what());
  }
}

json RecordsToJson(const std::vector<PreferenceRecord>& records) {
  json out = json::array();
  for (const PreferenceRecord& r : records) {
    out.push_back({{"source_id", r.z.source_id},
                   {"category", r.z.category},
                   {"z", VectorToJson(r.z.z)},
                   {"teacher_id", r.teacher_id},
                   {"beta", r.beta},
                   {"y", r.y}});
  }
  return out;
}

std::vector<PreferenceRecord> RecordsFromJson(const json& j) {
  std::vector<PreferenceRecord> out;
  try {
    for (const json& entry : j) {
      PreferenceRecord r;
      r.z = FeatureDiff{VectorFromJson(entry.at("z")),
                        entry.at("category").get<int>(),
                        entry.at("source_id").get<std::int64_t>()};
      r.teacher_id = entry.at("teacher_id").get<int>();
      r.beta = entry.at("beta").get<double>();
      r.y = entry.at("y").get<int>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("malformed records: ") + e.what());
  }
  return out;
}

json TraceToJson(const TraceRecord& t) {
  json j;
  j["step"] = t.step;
  j["batch"] = t.batch;
  j["candidate_id"] = t.candidate_id;
  j["teacher_id"] = t.teacher_id;
  j["beta"] = t.beta;
  j["gain"] = t.gain;
  j["log_det"] = t.log_det;
  j["theta_hat_norm"] = t.theta_hat_norm;
  return j;
}

LabelOracle MakeReplayOracle(std::vector<int> labels) {
  auto stream = std::make_shared<std::pair<std::vector<int>, size_t>>(
      std::move(labels), 0);
  return [stream](const FeatureDiff&, int, double) {
    if (stream->second >= stream->first.size()) {
      throw Error("label stream exhausted");
    }
    return stream->first[stream->second++];
  };
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace dual_reward
