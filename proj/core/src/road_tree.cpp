#include "cvs/road_tree.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "cvs/errors.hpp"

namespace cvs {
namespace {

// Key layout: bit 63 set for road states.
//   AtNode: node index in the low bits.
//   OnEdge: parent (27 bits) << 36 | child_index (16 bits) << 20 | offset (20 bits).
constexpr std::uint64_t kEdgeTag = std::uint64_t{1} << 63;
constexpr std::size_t kMaxNodes = std::size_t{1} << 27;
constexpr std::size_t kMaxChildren = std::size_t{1} << 16;
constexpr int kMaxDistance = 1 << 20;

std::string id_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ConfigError(std::string("tree spec: ") + what + " must be a string or integer");
}

}  // namespace

RoadTree::RoadTree(TreeSpec spec) : spec_(std::move(spec)) {
  const auto& nodes = spec_.nodes;
  if (nodes.empty()) throw ValidationError("tree spec has no nodes");
  if (nodes.size() >= kMaxNodes) throw ValidationError("tree spec has too many nodes");

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index_.emplace(nodes[i].id, i).second) {
      throw ValidationError("duplicate node id '" + nodes[i].id + "'");
    }
  }
  const auto root_it = index_.find(spec_.root_id);
  if (root_it == index_.end()) {
    throw ValidationError("root id '" + spec_.root_id + "' is not a node");
  }
  root_ = root_it->second;

  std::vector<std::size_t> parent(nodes.size(), nodes.size());
  children_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.children.size() >= kMaxChildren) {
      throw ValidationError("node '" + n.id + "' has too many children");
    }
    for (const auto& edge : n.children) {
      const auto it = index_.find(edge.child_id);
      if (it == index_.end()) {
        throw ValidationError("node '" + n.id + "' references unknown child '" + edge.child_id +
                              "'");
      }
      if (edge.distance < 1 || edge.distance > kMaxDistance) {
        throw ValidationError("edge '" + n.id + "' -> '" + edge.child_id +
                              "' has invalid distance " + std::to_string(edge.distance));
      }
      const std::size_t c = it->second;
      if (c == root_ || c == i) {
        throw ValidationError("cycle: node '" + n.id + "' points back to '" + edge.child_id + "'");
      }
      if (parent[c] != nodes.size()) {
        throw ValidationError("node '" + edge.child_id + "' has more than one parent ('" +
                              nodes[parent[c]].id + "' and '" + n.id + "')");
      }
      parent[c] = i;
      children_[i].push_back(Child{c, edge.distance});
    }
  }

  // With one parent per node, anything not reachable from the root is either
  // an orphan or sits on a cycle.
  std::vector<bool> reached(nodes.size(), false);
  std::vector<std::size_t> stack{root_};
  reached[root_] = true;
  while (!stack.empty()) {
    const std::size_t n = stack.back();
    stack.pop_back();
    for (const auto& c : children_[n]) {
      reached[c.node] = true;
      stack.push_back(c.node);
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (reached[i]) continue;
    std::vector<bool> seen(nodes.size(), false);
    for (std::size_t p = i; p != nodes.size(); p = parent[p]) {
      if (seen[p]) throw ValidationError("cycle involving node '" + nodes[p].id + "'");
      seen[p] = true;
    }
    throw ValidationError("node '" + nodes[i].id + "' is unreachable from root");
  }
}

std::size_t RoadTree::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) throw ValidationError("unknown node id '" + std::string(id) + "'");
  return it->second;
}

bool RoadTree::is_terminal(const RoadTreeState& state) const {
  const auto* at = std::get_if<AtNode>(&state);
  return at != nullptr && is_leaf(at->node);
}

int RoadTree::action_count(const RoadTreeState& state) const {
  if (const auto* at = std::get_if<AtNode>(&state)) {
    return static_cast<int>(children_[at->node].size());
  }
  return 1;
}

RoadTreeStep RoadTree::step(const RoadTreeState& state, ActionIndex action) const {
  if (is_terminal(state)) throw EpisodeError("road tree: step from a terminal state");
  if (action < 0 || action >= action_count(state)) {
    throw std::out_of_range("road tree: action " + std::to_string(action) + " out of range");
  }

  std::size_t parent = 0;
  std::size_t child_index = 0;
  int offset = 0;
  if (const auto* at = std::get_if<AtNode>(&state)) {
    parent = at->node;
    child_index = static_cast<std::size_t>(action);
  } else {
    const auto& edge = std::get<OnEdge>(state);
    parent = edge.parent;
    child_index = edge.child_index;
    offset = edge.offset;
  }

  const Child& c = children_[parent][child_index];
  if (offset + 1 < c.distance) {
    return RoadTreeStep{OnEdge{parent, child_index, offset + 1}, 0.0, false};
  }
  return RoadTreeStep{AtNode{c.node}, spec_.nodes[c.node].reward, is_leaf(c.node)};
}

StateKey RoadTree::encode(const RoadTreeState& state) const {
  if (const auto* at = std::get_if<AtNode>(&state)) {
    return StateKey{static_cast<std::uint64_t>(at->node)};
  }
  const auto& e = std::get<OnEdge>(state);
  return StateKey{kEdgeTag | (static_cast<std::uint64_t>(e.parent) << 36) |
                  (static_cast<std::uint64_t>(e.child_index) << 20) |
                  static_cast<std::uint64_t>(e.offset)};
}

RoadTreeState RoadTree::decode(StateKey key) const {
  const std::uint64_t v = key.value;
  if ((v & kEdgeTag) == 0) {
    if (v >= spec_.nodes.size()) throw std::out_of_range("road tree: bad state key");
    return AtNode{static_cast<std::size_t>(v)};
  }
  OnEdge e{static_cast<std::size_t>((v >> 36) & (kMaxNodes - 1)),
           static_cast<std::size_t>((v >> 20) & (kMaxChildren - 1)),
           static_cast<int>(v & ((1u << 20) - 1))};
  if (e.parent >= children_.size() || e.child_index >= children_[e.parent].size() ||
      e.offset < 1 || e.offset >= children_[e.parent][e.child_index].distance) {
    throw std::out_of_range("road tree: bad state key");
  }
  return e;
}

std::vector<double> RoadTree::leaf_returns() const {
  std::vector<double> out;
  std::vector<std::pair<std::size_t, double>> stack{{root_, 0.0}};
  while (!stack.empty()) {
    const auto [n, acc] = stack.back();
    stack.pop_back();
    if (children_[n].empty()) {
      out.push_back(acc);
      continue;
    }
    for (const auto& c : children_[n]) {
      stack.emplace_back(c.node, acc + spec_.nodes[c.node].reward);
    }
  }
  return out;
}

double junction_criticality(const RoadTreeState& state) noexcept {
  return std::holds_alternative<AtNode>(state) ? 1.0 : 0.0;
}

RoadTreeEnv::RoadTreeEnv(std::shared_ptr<const RoadTree> tree)
    : tree_(std::move(tree)), state_(tree_->initial_state()) {}

StateKey RoadTreeEnv::reset(Rng& /*rng*/) {
  state_ = tree_->initial_state();
  return tree_->encode(state_);
}

StepOutcome RoadTreeEnv::step(ActionIndex action) {
  const RoadTreeStep s = tree_->step(state_, action);
  state_ = s.next;
  return StepOutcome{tree_->encode(state_), s.reward, s.terminal};
}

int RoadTreeEnv::action_count() const { return tree_->action_count(state_); }

StateKey RoadTreeEnv::state() const { return tree_->encode(state_); }

TreeSpec tree1() {
  return TreeSpec{"root",
                  {
                      {"root", 0.0, {{"L", 20}, {"R", 10}}},
                      {"L", 0.0, {{"LL", 10}, {"LR", 15}}},
                      {"R", 1.0, {{"RL", 15}, {"RR", 15}}},
                      {"LL", 0.0, {}},
                      {"LR", 7.0, {}},
                      {"RL", 1.0, {}},
                      {"RR", 1.0, {}},
                  }};
}

TreeSpec tree2() {
  return TreeSpec{"root",
                  {
                      {"root", 0.0, {{"A", 50}, {"B", 50}}},
                      {"A", 1.0, {}},
                      {"B", 2.0, {}},
                  }};
}

TreeSpec tree3(int siblings) {
  if (siblings < 1) {
    throw ValidationError("tree3: sibling count must be >= 1, got " + std::to_string(siblings));
  }
  constexpr int kRoad = 10;
  TreeSpec spec;
  spec.root_id = "root";
  spec.nodes.push_back({"root", 0.0, {{"L", kRoad}, {"R", kRoad}}});
  spec.nodes.push_back({"L", 0.0, {{"L0", kRoad}, {"L1", kRoad}}});
  TreeNode right{"R", 1.0, {}};
  for (int i = 0; i < siblings; ++i) {
    right.children.push_back({"R" + std::to_string(i), kRoad});
  }
  right.children.push_back({"Rgood", kRoad});
  spec.nodes.push_back(right);
  spec.nodes.push_back({"L0", 0.0, {}});
  spec.nodes.push_back({"L1", 1.0, {}});
  for (int i = 0; i < siblings; ++i) {
    spec.nodes.push_back({"R" + std::to_string(i), -2.0, {}});
  }
  spec.nodes.push_back({"Rgood", 1.0, {}});
  return spec;
}

TreeSpec parse_tree_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("tree spec: ") + e.what());
  }
  if (!j.is_object() || !j.contains("root_id") || !j.contains("nodes") ||
      !j.at("nodes").is_array()) {
    throw ConfigError("tree spec: expected object with 'root_id' and 'nodes' array");
  }
  TreeSpec spec;
  spec.root_id = id_from_json(j.at("root_id"), "root_id");
  try {
    for (const auto& jn : j.at("nodes")) {
      TreeNode n;
      n.id = id_from_json(jn.at("id"), "node id");
      n.reward = jn.value("reward", 0.0);
      if (jn.contains("children")) {
        for (const auto& jc : jn.at("children")) {
          n.children.push_back({id_from_json(jc.at("id"), "child id"), jc.value("distance", 1)});
        }
      }
      spec.nodes.push_back(std::move(n));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tree spec: ") + e.what());
  }
  return spec;
}

TreeSpec load_tree_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read tree spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tree_spec(buf.str());
}

std::string tree_spec_to_json(const TreeSpec& spec) {
  nlohmann::json j;
  j["root_id"] = spec.root_id;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : spec.nodes) {
    nlohmann::json jn{{"id", n.id}, {"reward", n.reward}, {"children", nlohmann::json::array()}};
    for (const auto& c : n.children) {
      jn["children"].push_back({{"id", c.child_id}, {"distance", c.distance}});
    }
    j["nodes"].push_back(std::move(jn));
  }
  return j.dump(2);
}

}  // namespace cvs
