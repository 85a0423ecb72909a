#include "emetree/labelspace.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace emetree {

namespace {

bool is_unary_internal(const Node& n) {
  return !n.is_preterminal() && n.children.size() == 1 && !n.children.front().is_preterminal();
}

}  // namespace

Node collapse_unaries(const Node& node) {
  if (node.is_preterminal()) return node;
  NodeLabel label = node.label;
  const Node* bottom = &node;
  while (is_unary_internal(*bottom)) {
    bottom = &bottom->children.front();
    for (auto& part : bottom->label.parts()) label.chain.push_back(std::move(part));
  }
  std::vector<Node> kids;
  kids.reserve(bottom->children.size());
  for (const auto& c : bottom->children) kids.push_back(collapse_unaries(c));
  return Node::internal(std::move(label), std::move(kids));
}

Tree collapse_unaries(const Tree& tree) { return Tree{collapse_unaries(tree.root), tree.id}; }

Node expand_label(const Node& node) {
  if (node.is_preterminal()) return node;
  std::vector<Node> kids;
  kids.reserve(node.children.size());
  for (const auto& c : node.children) kids.push_back(expand_label(c));
  auto parts = node.label.parts();
  Node current = Node::internal(std::move(parts.back()), std::move(kids));
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
    current = Node::internal(std::move(*it), std::vector<Node>{std::move(current)});
  return current;
}

Tree expand_label(const Tree& tree) { return Tree{expand_label(tree.root), tree.id}; }

bool has_unary_chain(const Node& node) {
  bool found = false;
  for_each_node(node, [&](const Node& n) { found = found || is_unary_internal(n); });
  return found;
}

std::set<std::string> label_set(const std::vector<Tree>& trees, bool collapse) {
  std::set<std::string> out;
  for (const auto& t : trees) {
    const Tree view = collapse ? collapse_unaries(t) : t;
    for (const auto& span : tree_spans(view)) out.insert(span.label.str());
  }
  return out;
}

VocabReport build_vocab(const std::vector<Tree>& train, const std::vector<Tree>& dev, bool collapse) {
  if (train.empty()) throw std::invalid_argument("build_vocab: training section is empty");

  auto intersect = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
  };

  const auto train_w = label_set(train, true), train_wo = label_set(train, false);
  const auto dev_w = label_set(dev, true), dev_wo = label_set(dev, false);
  const auto both_w = intersect(train_w, dev_w), both_wo = intersect(train_wo, dev_wo);

  auto section = [&](const std::set<std::string>& with, const std::set<std::string>& without) {
    const auto& chosen = collapse ? with : without;
    return VocabSection{with.size(), without.size(), {chosen.begin(), chosen.end()}};
  };

  VocabReport report;
  report.collapse = collapse;
  report.train = section(train_w, train_wo);
  report.dev = section(dev_w, dev_wo);
  report.both = section(both_w, both_wo);
  const auto& tr = collapse ? train_w : train_wo;
  const auto& dv = collapse ? dev_w : dev_wo;
  std::set_difference(dv.begin(), dv.end(), tr.begin(), tr.end(), std::back_inserter(report.oov_labels));
  return report;
}

}  // namespace emetree
