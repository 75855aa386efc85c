#pragma once

#include "dsq/features.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsq {

class DecisionTree {
public:
    struct Branch {
        int value = 0;  // feature value, or the threshold of a "<=" branch
        int child = 0;
    };

    struct Node {
        bool leaf = true;
        Label label = Label::WhiteWin;
        Feature feature = Feature::Closest;
        // Numeric nodes hold two branches: "<= value" then "> value".
        std::vector<Branch> branches;
    };

    static DecisionTree leaf(Label l);

    int add_leaf(Label l);
    int add_split(Feature f);
    void add_branch(int node, int value, int child);

    const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    int root() const { return 0; }
    std::size_t size() const { return nodes_.size(); }
    int depth() const;

    // Throws Validation when no branch matches.
    Label classify(const FeatureVector& v) const;

    // Line format: "? feature", "= value :", "<= t :", "> t :", "-> label",
    // indented two spaces per level.
    std::string to_text() const;
    static DecisionTree parse(std::string_view text);

    bool operator==(const DecisionTree&) const;

private:
    std::vector<Node> nodes_;
};

bool operator==(const DecisionTree::Branch& a, const DecisionTree::Branch& b);
bool operator==(const DecisionTree::Node& a, const DecisionTree::Node& b);

// ID3 with information gain. Categorical features get one branch per domain
// value; numeric features get the best binary cut. Equal gains go to the
// feature listed first in `features`; an empty list means all features.
DecisionTree induce_tree(std::span<const LabeledExample> examples, std::span<const Feature> features = {});

std::uint64_t misclassified(const DecisionTree& tree, std::span<const LabeledExample> examples);
// Positions of a 2-piece tablebase whose tree label differs from the table.
std::uint64_t evaluate_tree(const DecisionTree& tree, const Tablebase& tb);

// The published two-piece trees.
DecisionTree equal_material_tree();   // same strength, no leapers
DecisionTree black_stronger_tree();   // no rats, tigers or lions
DecisionTree lion_elephant_tree();    // white tiger or lion vs black elephant

}  // namespace dsq
