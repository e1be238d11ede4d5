#include "lqgame/tree_io.hpp"

#include <fstream>

#include "json.hpp"
#include "lqgame/errors.hpp"

namespace lqgame {

namespace {

using nlohmann::json;

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw SolverError("tree file: P must be a non-empty array of rows");
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(rows.at(0).size());
  MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const json& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != nc)
      throw SolverError("tree file: ragged P rows");
    for (Eigen::Index c = 0; c < nc; ++c)
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

}  // namespace

std::string serialize_tree(const StrategyTree& tree) {
  json doc;
  doc["horizon"] = tree.horizon;
  doc["method"] = tree.method;
  doc["converged"] = tree.converged;
  doc["distinct_decision_covariances"] = tree.distinct_decision_covariances;
  doc["stage0"] = {{"i_d", tree.stage0.decision.id},
                   {"i_a", tree.stage0.decision.ia},
                   {"threshold", tree.stage0.threshold},
                   {"J", tree.stage0.J},
                   {"root0", tree.stage0.root0},
                   {"root1", tree.stage0.root1}};
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({{"id", n.id},
                     {"stage", n.stage},
                     {"key", n.key},
                     {"P", matrix_to_json(n.P)},
                     {"child0", n.child0},
                     {"child1", n.child1},
                     {"i_d", n.decision.id},
                     {"i_a", n.decision.ia},
                     {"threshold", n.threshold},
                     {"J", n.J}});
  }
  doc["nodes"] = std::move(nodes);
  doc["on_path"] = tree.on_path;
  return doc.dump(2) + "\n";
}

StrategyTree parse_tree(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SolverError(std::string("tree file: ") + e.what());
  }
  try {
    StrategyTree tree;
    tree.horizon = doc.at("horizon").get<int>();
    tree.method = doc.at("method").get<std::string>();
    tree.converged = doc.at("converged").get<bool>();
    tree.distinct_decision_covariances =
        doc.at("distinct_decision_covariances").get<int>();
    const json& s0 = doc.at("stage0");
    tree.stage0.decision.id = s0.at("i_d").get<int>();
    tree.stage0.decision.ia = s0.at("i_a").get<int>();
    tree.stage0.threshold = s0.at("threshold").get<double>();
    tree.stage0.J = s0.at("J").get<double>();
    tree.stage0.root0 = s0.at("root0").get<int>();
    tree.stage0.root1 = s0.at("root1").get<int>();
    for (const json& jn : doc.at("nodes")) {
      CovarianceNode n;
      n.id = jn.at("id").get<int>();
      n.stage = jn.at("stage").get<int>();
      n.key = jn.at("key").get<std::string>();
      n.P = matrix_from_json(jn.at("P"));
      n.child0 = jn.at("child0").get<int>();
      n.child1 = jn.at("child1").get<int>();
      n.decision.id = jn.at("i_d").get<int>();
      n.decision.ia = jn.at("i_a").get<int>();
      n.threshold = jn.at("threshold").get<double>();
      n.J = jn.at("J").get<double>();
      tree.nodes.push_back(std::move(n));
    }
    tree.on_path = doc.at("on_path").get<std::vector<int>>();
    return tree;
  } catch (const json::exception& e) {
    throw SolverError(std::string("tree file: ") + e.what());
  }
}

void save_tree(const StrategyTree& tree, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SolverError("cannot open " + path + " for writing");
  out << serialize_tree(tree);
  if (!out) throw SolverError("failed writing " + path);
}

StrategyTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SolverError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_tree(text);
}

}  // namespace lqgame
