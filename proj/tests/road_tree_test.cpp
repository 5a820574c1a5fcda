#include <algorithm>
#include <memory>
#include <numeric>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "cvs/errors.hpp"
#include "cvs/road_tree.hpp"

namespace cvs {
namespace {

struct Rollout {
  std::vector<double> rewards;
  int steps = 0;
  double total = 0.0;
};

// Walks from the root taking `choices` at successive junctions; simple
// states always take action 0.
Rollout walk(const RoadTree& tree, std::vector<ActionIndex> choices) {
  Rollout out;
  RoadTreeState s = tree.initial_state();
  std::size_t next_choice = 0;
  while (!tree.is_terminal(s)) {
    ActionIndex a = 0;
    if (std::holds_alternative<AtNode>(s)) a = choices.at(next_choice++);
    const auto step = tree.step(s, a);
    out.rewards.push_back(step.reward);
    out.total += step.reward;
    ++out.steps;
    s = step.next;
    EXPECT_EQ(step.terminal, tree.is_terminal(s));
  }
  return out;
}

TEST(RoadTree, Tree1Layout) {
  const RoadTree tree(tree1());
  EXPECT_EQ(tree.action_count(tree.initial_state()), 2);
  const auto& root = tree.node(tree.root());
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[0].distance, 20);
  EXPECT_EQ(root.children[1].distance, 10);
  const auto& left = tree.node(tree.index_of("L"));
  EXPECT_EQ(left.reward, 0.0);
  EXPECT_EQ(left.children[0].distance, 10);
  EXPECT_EQ(left.children[1].distance, 15);
  EXPECT_EQ(tree.node(tree.index_of(left.children[0].child_id)).reward, 0.0);
  EXPECT_EQ(tree.node(tree.index_of(left.children[1].child_id)).reward, 7.0);
  const auto& right = tree.node(tree.index_of("R"));
  EXPECT_EQ(right.reward, 1.0);
  for (const auto& c : right.children) {
    EXPECT_EQ(c.distance, 15);
    EXPECT_EQ(tree.node(tree.index_of(c.child_id)).reward, 1.0);
  }
}

TEST(RoadTree, SingleNodeIsTerminalAtReset) {
  const RoadTree tree(TreeSpec{"only", {{"only", 0.0, {}}}});
  EXPECT_TRUE(tree.is_terminal(tree.initial_state()));
  EXPECT_EQ(tree.action_count(tree.initial_state()), 0);
  EXPECT_THROW(tree.step(tree.initial_state(), 0), EpisodeError);
}

TEST(RoadTree, DistanceOneHasNoSimpleStates) {
  const RoadTree tree(TreeSpec{"r", {{"r", 0.0, {{"leaf", 1}}}, {"leaf", 3.5, {}}}});
  const auto step = tree.step(tree.initial_state(), 0);
  EXPECT_TRUE(std::holds_alternative<AtNode>(step.next));
  EXPECT_EQ(step.reward, 3.5);
  EXPECT_TRUE(step.terminal);
}

TEST(RoadTree, RightRoadOfTree1) {
  const RoadTree tree(tree1());
  RoadTreeState s = tree.initial_state();
  auto step = tree.step(s, 1);
  for (int i = 0; i < 9; ++i) {
    ASSERT_TRUE(std::holds_alternative<OnEdge>(step.next)) << i;
    EXPECT_EQ(step.reward, 0.0);
    EXPECT_EQ(tree.action_count(step.next), 1);
    EXPECT_EQ(junction_criticality(step.next), 0.0);
    if (i < 8) step = tree.step(step.next, 0);
  }
  step = tree.step(step.next, 0);
  ASSERT_TRUE(std::holds_alternative<AtNode>(step.next));
  EXPECT_EQ(std::get<AtNode>(step.next).node, tree.index_of("R"));
  EXPECT_EQ(step.reward, 1.0);
  EXPECT_FALSE(step.terminal);
  EXPECT_EQ(junction_criticality(step.next), 1.0);
}

TEST(RoadTree, Tree2RewardTwoRoad) {
  const RoadTree tree(tree2());
  const Rollout r = walk(tree, {1});
  ASSERT_EQ(r.steps, 50);
  for (int i = 0; i < 49; ++i) EXPECT_EQ(r.rewards[i], 0.0);
  EXPECT_EQ(r.rewards[49], 2.0);
  EXPECT_EQ(r.total, 2.0);
  EXPECT_EQ(walk(tree, {0}).total, 1.0);
}

TEST(RoadTree, Tree1OptimalReturn) {
  const RoadTree tree(tree1());
  EXPECT_EQ(walk(tree, {0, 1}).total, 7.0);
  const auto returns = tree.leaf_returns();
  EXPECT_EQ(*std::max_element(returns.begin(), returns.end()), 7.0);
}

TEST(RoadTree, Tree3Shape) {
  const RoadTree tree(tree3());
  const auto& right = tree.node(tree.index_of("R"));
  EXPECT_EQ(right.children.size(), 100u);
  int bad = 0, good = 0;
  for (const auto& c : right.children) {
    const double r = tree.node(tree.index_of(c.child_id)).reward;
    bad += r == -2.0;
    good += r == 1.0;
  }
  EXPECT_EQ(bad, 99);
  EXPECT_EQ(good, 1);
  EXPECT_EQ(walk(tree, {1, 0}).total, -1.0);  // 1 + (-2)
  EXPECT_EQ(walk(tree, {1, 99}).total, 2.0);
  EXPECT_EQ(walk(tree, {0, 1}).total, 1.0);
  EXPECT_EQ(RoadTree(tree3(19)).node(2).children.size(), 20u);
  EXPECT_THROW(tree3(0), ValidationError);
}

TEST(RoadTree, Validation) {
  const auto expect_error = [](TreeSpec spec, const std::string& needle) {
    try {
      RoadTree t(std::move(spec));
      ADD_FAILURE() << "expected ValidationError containing " << needle;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error({"a", {{"a", 0, {{"b", 1}}}, {"a", 0, {}}}}, "duplicate node id 'a'");
  expect_error({"a", {{"a", 0, {{"zz", 1}}}}}, "'zz'");
  expect_error({"a", {{"a", 0, {{"b", 0}}}, {"b", 0, {}}}}, "distance 0");
  expect_error({"a", {{"a", 0, {{"b", 1}}}, {"b", 0, {{"a", 1}}}}}, "cycle");
  expect_error({"a", {{"a", 0, {{"b", 1}}}, {"b", 0, {}}, {"c", 0, {{"d", 1}}}, {"d", 0, {{"c", 1}}}}},
               "cycle involving node");
  expect_error({"a", {{"a", 0, {{"b", 1}, {"c", 1}}}, {"b", 0, {{"c", 1}}}, {"c", 0, {}}}},
               "more than one parent");
  expect_error({"a", {{"a", 0, {}}, {"orphan", 0, {}}}}, "'orphan' is unreachable");
  expect_error({"missing", {{"a", 0, {}}}}, "root id 'missing'");
}

TEST(RoadTree, EncodeDecodeRoundTripOverAllStates) {
  const RoadTree tree(tree1());
  std::set<std::uint64_t> keys;
  std::size_t count = 0;
  for (std::size_t n = 0; n < tree.node_count(); ++n) {
    const RoadTreeState s = AtNode{n};
    keys.insert(tree.encode(s).value);
    EXPECT_EQ(tree.decode(tree.encode(s)), s);
    ++count;
    const auto& node = tree.node(n);
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      for (int k = 1; k < node.children[c].distance; ++k) {
        const RoadTreeState e = OnEdge{n, c, k};
        keys.insert(tree.encode(e).value);
        EXPECT_EQ(tree.decode(tree.encode(e)), e);
        ++count;
      }
    }
  }
  EXPECT_EQ(keys.size(), count);
  // 7 nodes plus (20-1)+(10-1)+(10-1)+(15-1)+(15-1)+(15-1) road states.
  EXPECT_EQ(count, 7u + 19 + 9 + 9 + 14 + 14 + 14);
}

TEST(RoadTree, StepErrors) {
  const RoadTree tree(tree1());
  EXPECT_THROW(tree.step(tree.initial_state(), 2), std::out_of_range);
  EXPECT_THROW(tree.step(OnEdge{0, 0, 3}, 1), std::out_of_range);
  EXPECT_THROW(tree.step(AtNode{tree.index_of("LR")}, 0), EpisodeError);
}

// Properties over every root-to-leaf path of the benchmark trees: episode
// length equals the summed road distances and the return equals the summed
// node rewards.
TEST(RoadTree, PathLengthAndReturnProperty) {
  for (const TreeSpec& spec : {tree1(), tree2(), tree3(7)}) {
    const RoadTree tree(spec);
    std::vector<std::pair<std::vector<ActionIndex>, std::size_t>> stack{{{}, tree.root()}};
    while (!stack.empty()) {
      auto [choices, node] = stack.back();
      stack.pop_back();
      const auto& n = tree.node(node);
      if (n.children.empty()) {
        // Recompute expected values directly from the spec.
        int length = 0;
        double total = 0.0;
        std::size_t cur = tree.root();
        for (ActionIndex a : choices) {
          const auto& edge = tree.node(cur).children[static_cast<std::size_t>(a)];
          length += edge.distance;
          cur = tree.index_of(edge.child_id);
          total += tree.node(cur).reward;
        }
        const Rollout r = walk(tree, choices);
        EXPECT_EQ(r.steps, length);
        EXPECT_EQ(r.total, total);
        continue;
      }
      for (std::size_t c = 0; c < n.children.size(); ++c) {
        auto next = choices;
        next.push_back(static_cast<ActionIndex>(c));
        stack.emplace_back(std::move(next), tree.index_of(n.children[c].child_id));
      }
    }
  }
}

TEST(RoadTreeEnv, StepsThroughEnvironmentInterface) {
  auto tree = std::make_shared<const RoadTree>(tree2());
  RoadTreeEnv env(tree);
  Rng rng(0);
  const StateKey start = env.reset(rng);
  EXPECT_EQ(start, tree->encode(tree->initial_state()));
  EXPECT_EQ(env.action_count(), 2);
  StepOutcome out = env.step(0);
  int steps = 1;
  while (!out.terminal) {
    EXPECT_EQ(env.action_count(), 1);
    out = env.step(0);
    ++steps;
  }
  EXPECT_EQ(steps, 50);
  EXPECT_EQ(out.reward, 1.0);
  EXPECT_EQ(env.action_count(), 0);
  EXPECT_THROW(env.step(0), EpisodeError);
  env.reset(rng);
  EXPECT_EQ(env.action_count(), 2);
}

TEST(TreeSpecJson, ParsesStringAndIntegerIds) {
  const TreeSpec spec = parse_tree_spec(R"({
    "root_id": 0,
    "nodes": [
      {"id": 0, "reward": 0, "children": [{"id": "x", "distance": 3}, {"id": 2, "distance": 1}]},
      {"id": "x", "reward": 4.5},
      {"id": 2, "reward": -1, "children": []}
    ]})");
  const RoadTree tree(spec);
  EXPECT_EQ(tree.action_count(tree.initial_state()), 2);
  EXPECT_EQ(tree.node(tree.index_of("x")).reward, 4.5);
  EXPECT_EQ(tree.node(tree.index_of("2")).reward, -1.0);
  EXPECT_EQ(tree.node(tree.root()).children[0].distance, 3);
}

TEST(TreeSpecJson, RoundTrip) {
  const TreeSpec a = tree3(5);
  const TreeSpec b = parse_tree_spec(tree_spec_to_json(a));
  EXPECT_EQ(tree_spec_to_json(a), tree_spec_to_json(b));
}

TEST(TreeSpecJson, Malformed) {
  EXPECT_THROW(parse_tree_spec("{"), ConfigError);
  EXPECT_THROW(parse_tree_spec(R"({"nodes": []})"), ConfigError);
  EXPECT_THROW(parse_tree_spec(R"({"root_id": 0, "nodes": [{"reward": 1}]})"), ConfigError);
  EXPECT_THROW(load_tree_spec("/nonexistent/tree.json"), IoError);
}

}  // namespace
}  // namespace cvs
