#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cvs/environment.hpp"
#include "cvs/types.hpp"

namespace cvs {

// ---------------------------------------------------------------------------
// Road-Tree: a rooted tree of junctions joined by roads. A road of distance d
// holds d-1 single-action "simple" states. Rewards are paid on arrival at a
// node (junction or leaf); simple states pay zero. Leaves are terminal.
// Child order defines action order at a junction.
// ---------------------------------------------------------------------------

struct TreeEdge {
  std::string child_id;
  int distance = 1;
};

struct TreeNode {
  std::string id;
  double reward = 0.0;
  std::vector<TreeEdge> children;
};

struct TreeSpec {
  std::string root_id;
  std::vector<TreeNode> nodes;
};

struct AtNode {
  std::size_t node = 0;
  friend bool operator==(const AtNode&, const AtNode&) = default;
};

/// Simple state `offset` steps along the road from `parent` to its child
/// number `child_index`; 1 <= offset <= distance - 1.
struct OnEdge {
  std::size_t parent = 0;
  std::size_t child_index = 0;
  int offset = 1;
  friend bool operator==(const OnEdge&, const OnEdge&) = default;
};

using RoadTreeState = std::variant<AtNode, OnEdge>;

struct RoadTreeStep {
  RoadTreeState next;
  double reward = 0.0;
  bool terminal = false;
};

/// Validated, indexed tree. Immutable after construction and safe to share
/// between threads.
class RoadTree {
 public:
  /// Throws ValidationError naming the offending node on duplicate ids,
  /// unknown children, distances < 1, cycles, multiple parents or nodes
  /// unreachable from the root.
  explicit RoadTree(TreeSpec spec);

  const TreeSpec& spec() const noexcept { return spec_; }
  std::size_t node_count() const noexcept { return spec_.nodes.size(); }
  std::size_t root() const noexcept { return root_; }
  const TreeNode& node(std::size_t index) const { return spec_.nodes.at(index); }

  /// Throws ValidationError for an unknown id.
  std::size_t index_of(std::string_view id) const;

  RoadTreeState initial_state() const { return AtNode{root_}; }
  bool is_leaf(std::size_t node_index) const { return children_[node_index].empty(); }
  bool is_terminal(const RoadTreeState& state) const;
  int action_count(const RoadTreeState& state) const;

  /// Throws EpisodeError for terminal states, std::out_of_range for bad actions.
  RoadTreeStep step(const RoadTreeState& state, ActionIndex action) const;

  StateKey encode(const RoadTreeState& state) const;
  RoadTreeState decode(StateKey key) const;

  /// Every root-to-leaf path's reward sum (root reward excluded).
  std::vector<double> leaf_returns() const;

 private:
  struct Child {
    std::size_t node;
    int distance;
  };

  TreeSpec spec_;
  std::size_t root_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Child>> children_;
};

/// 1 at junctions and leaves, 0 on simple road states.
double junction_criticality(const RoadTreeState& state) noexcept;

class RoadTreeEnv final : public Environment {
 public:
  explicit RoadTreeEnv(std::shared_ptr<const RoadTree> tree);

  StateKey reset(Rng& rng) override;
  StepOutcome step(ActionIndex action) override;
  int action_count() const override;
  StateKey state() const override;

  const RoadTreeState& tree_state() const noexcept { return state_; }
  const RoadTree& tree() const noexcept { return *tree_; }

 private:
  std::shared_ptr<const RoadTree> tree_;
  RoadTreeState state_;
};

// Benchmark trees.

/// Two-level tree: left junction (reward 0, road 20) with leaves 0 (road 10)
/// and 7 (road 15); right junction (reward 1, road 10) with two leaves of 1
/// (road 15). Optimal return 7.
TreeSpec tree1();

/// Two roads of distance 50 to leaves rewarding 1 and 2.
TreeSpec tree2();

/// Left junction (reward 0) with leaves 0 and 1; right junction (reward 1)
/// with `siblings` leaves of -2 followed by one leaf of +1. All roads have
/// distance 10. Throws ValidationError when siblings < 1.
TreeSpec tree3(int siblings = 99);

/// Parses {"root_id": ..., "nodes": [{"id", "reward", "children": [{"id", "distance"}]}]}.
/// Ids may be strings or integers. Throws ConfigError on malformed input.
TreeSpec parse_tree_spec(std::string_view json_text);
TreeSpec load_tree_spec(const std::filesystem::path& path);
std::string tree_spec_to_json(const TreeSpec& spec);

}  // namespace cvs
