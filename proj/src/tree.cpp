#include "mgbt/tree.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mgbt {

size_t Tree::leaf_count() const {
    size_t n = 0;
    for (const auto& node : nodes) n += node.is_leaf ? 1 : 0;
    return n;
}

std::vector<NodeId> Tree::leaf_ids() const {
    std::vector<NodeId> ids;
    for (const auto& node : nodes) {
        if (node.is_leaf) ids.push_back(node.id);
    }
    return ids;
}

double Tree::predict_bins(const std::vector<uint16_t>& row_bins) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf) {
        const uint16_t b = row_bins[static_cast<size_t>(node->feature)];
        node = &nodes[static_cast<size_t>(b <= node->threshold ? node->left : node->right)];
    }
    return node->leaf_output;
}

double Tree::predict_row(const BinnedDataset& ds, size_t row) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf) {
        const uint16_t b = ds.bin_of(static_cast<size_t>(node->feature), row);
        node = &nodes[static_cast<size_t>(b <= node->threshold ? node->left : node->right)];
    }
    return node->leaf_output;
}

std::vector<LeafRegion> node_regions(const Tree& tree, const std::vector<uint16_t>& bin_counts) {
    std::vector<LeafRegion> regions(tree.nodes.size());
    LeafRegion root_region(bin_counts.size());
    for (size_t f = 0; f < bin_counts.size(); ++f) {
        root_region[f] = {0, static_cast<uint16_t>(bin_counts[f] - 1)};
    }
    regions[0] = std::move(root_region);
    // Node ids are assigned in creation order, so parents precede children.
    for (const auto& node : tree.nodes) {
        if (node.is_leaf) continue;
        LeafRegion left = regions[static_cast<size_t>(node.id)];
        LeafRegion right = left;
        left[static_cast<size_t>(node.feature)].hi = static_cast<uint16_t>(node.threshold);
        right[static_cast<size_t>(node.feature)].lo = static_cast<uint16_t>(node.threshold + 1);
        regions[static_cast<size_t>(node.left)] = std::move(left);
        regions[static_cast<size_t>(node.right)] = std::move(right);
    }
    return regions;
}

std::string export_dot(const Tree& tree, const std::vector<std::string>& feature_names) {
    auto feature_label = [&](int f) {
        if (f >= 0 && static_cast<size_t>(f) < feature_names.size()) return feature_names[f];
        return "f" + std::to_string(f);
    };
    char buf[160];
    std::ostringstream out;
    out << "digraph tree {\n";
    out << "  node [shape=box, fontname=\"Helvetica\"];\n";
    for (const auto& node : tree.nodes) {
        if (node.is_leaf) {
            std::snprintf(buf, sizeof(buf), "%.6g", node.leaf_output);
            out << "  n" << node.id << " [label=\"leaf " << buf << "\"];\n";
        } else {
            std::snprintf(buf, sizeof(buf), "%.6g", node.split_gain);
            out << "  n" << node.id << " [label=\"" << feature_label(node.feature)
                << " <= bin " << node.threshold << "\\ngain " << buf << "\\norder "
                << node.split_order << "\"";
            if (node.is_monotone_split) {
                out << ", style=filled, fillcolor=palegreen";
            }
            out << "];\n";
        }
    }
    for (const auto& node : tree.nodes) {
        if (node.is_leaf) continue;
        out << "  n" << node.id << " -> n" << node.left << " [label=\"yes\"];\n";
        out << "  n" << node.id << " -> n" << node.right << " [label=\"no\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string tree_to_json(const Tree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::json j;
        j["id"] = n.id;
        j["kind"] = n.is_leaf ? "leaf" : "internal";
        j["depth"] = n.depth;
        j["parent"] = n.parent;
        if (n.is_leaf) {
            j["output"] = n.leaf_output;
        } else {
            j["feature"] = n.feature;
            j["threshold"] = n.threshold;
            j["left"] = n.left;
            j["right"] = n.right;
            j["order"] = n.split_order;
            j["monotone"] = n.is_monotone_split;
            j["gain"] = n.split_gain;
        }
        nodes.push_back(std::move(j));
    }
    return nodes.dump();
}

Tree tree_from_json(const std::string& text) {
    nlohmann::json nodes = nlohmann::json::parse(text);
    Tree tree;
    tree.nodes.resize(nodes.size());
    for (const auto& j : nodes) {
        TreeNode n;
        n.id = j.at("id").get<NodeId>();
        n.is_leaf = j.at("kind").get<std::string>() == "leaf";
        n.depth = j.at("depth").get<int>();
        n.parent = j.at("parent").get<NodeId>();
        if (n.is_leaf) {
            n.leaf_output = j.at("output").get<double>();
        } else {
            n.feature = j.at("feature").get<int>();
            n.threshold = j.at("threshold").get<int>();
            n.left = j.at("left").get<NodeId>();
            n.right = j.at("right").get<NodeId>();
            n.split_order = j.at("order").get<int>();
            n.is_monotone_split = j.at("monotone").get<bool>();
            n.split_gain = j.at("gain").get<double>();
        }
        if (n.id < 0 || static_cast<size_t>(n.id) >= tree.nodes.size()) {
            throw std::runtime_error("tree json: node id out of range");
        }
        tree.nodes[static_cast<size_t>(n.id)] = n;
    }
    return tree;
}

}  // namespace mgbt
