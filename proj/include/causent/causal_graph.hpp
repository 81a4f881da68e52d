#ifndef CAUSENT_CAUSAL_GRAPH_HPP
#define CAUSENT_CAUSAL_GRAPH_HPP

#include "causent/common.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causent {

enum class Role { observed, unobserved };

// One entry of a node's post-selection context: this copy only exists in the
// branch where the named selector took the given value.
struct ContextTag {
    std::string selector;
    int value = 0;

    friend bool operator==(const ContextTag&, const ContextTag&) = default;
    friend auto operator<=>(const ContextTag&, const ContextTag&) = default;
};

struct GraphNode {
    std::string name;
    Role role = Role::observed;
    std::vector<ContextTag> context;   // sorted; empty unless created by post_select
    bool quantum_contextual = false;   // copy whose generation consumes a quantum system
};

// A subsystem carried by an edge leaving an unobserved node. After quantum
// post-selection one subsystem may be wired to several alternative copies of
// the same original child, hence a list of children.
struct Subsystem {
    std::string label;
    int source = -1;
    std::vector<int> children;
};

class CausalStructure {
public:
    std::string name = "anonymous";

    CausalStructure() = default;
    CausalStructure(std::string name,
                    std::vector<std::pair<std::string, Role>> nodes,
                    std::vector<std::pair<std::string, std::string>> edges,
                    std::vector<std::pair<std::string, std::pair<std::string, std::string>>>
                        subsystem_labels = {});

    int node_count() const { return int(nodes_.size()); }
    const GraphNode& node(int i) const { return nodes_[i]; }
    int index(const std::string& name) const;           // throws on unknown name
    std::optional<int> find(const std::string& name) const;

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int parent, int child) const;

    std::vector<int> parents_of(int v) const;
    std::vector<int> children_of(int v) const;
    std::vector<int> topological_order() const;

    bool has_unobserved() const;
    std::vector<std::string> observed_names() const;    // sorted
    std::vector<std::string> node_names() const;        // sorted

    const std::vector<Subsystem>& subsystems() const { return subsystems_; }

    // Strict closures; non_descendants = nodes \ (x + descendants).
    struct Relations {
        NameSet ancestors, descendants, parents, non_descendants;
    };
    Relations relations(const NameSet& x) const;

    bool is_d_separated(const NameSet& x, const NameSet& y, const NameSet& z) const;

    CausalStructure post_select(const std::string& node, int values) const;

    std::string to_dsl() const;

private:
    friend class ElementTable;
    friend CausalStructure parse_structure(const std::string&);

    std::vector<GraphNode> nodes_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<Subsystem> subsystems_;
    std::map<std::string, int> by_name_;

    void add_node(GraphNode n);
    void add_edge(int parent, int child);
    void finalize();                                    // validates + labels subsystems
    std::vector<int> resolve(const NameSet& names) const;
    NameSet descendants_closure(const std::vector<int>& x) const;
    NameSet ancestors_closure(const std::vector<int>& x) const;
};

struct CIStatement {
    NameSet left, right, given;
};

CausalStructure parse_structure(const std::string& text);

std::vector<CIStatement> local_markov(const CausalStructure& s);

// Elements of a quantum causal structure: observed variables plus one
// subsystem per unobserved-source edge, with the coexistence relation of
// Def. 9 realized through birth/death nodes.
class ElementTable {
public:
    explicit ElementTable(const CausalStructure& s);

    const std::vector<std::string>& elements() const { return names_; }  // sorted
    bool is_subsystem(const std::string& element) const;
    bool coexist(const std::string& a, const std::string& b) const;
    bool entanglement_possible(const std::string& a, const std::string& b) const;

    // All element sets that admit a joint state, closed under non-empty subsets.
    std::vector<NameSet> coexisting_sets() const;
    std::vector<NameSet> maximal_coexisting_sets() const;

    // Auxiliary DAG over observed variables and subsystems, with every
    // subsystem of an unobserved node a parent of each of the node's children.
    bool aux_d_separated(const NameSet& x, const NameSet& y, const NameSet& z) const;

    // Independence surrogate for the product-state test: ancestral source
    // nodes of an element set in the auxiliary graph.
    bool shares_ancestry(const NameSet& a, const NameSet& b) const;

private:
    struct Element {
        std::string name;
        bool subsystem = false;
        int birth = -1;                  // node index in s
        std::vector<int> deaths;         // consuming nodes (subsystems only)
        std::vector<ContextTag> context;
        bool contextual = false;
    };

    const CausalStructure& s_;
    std::vector<Element> elems_;
    std::vector<std::string> names_;
    std::map<std::string, int> by_name_;
    CausalStructure aux_;                // auxiliary DAG (all nodes observed)

    const Element& get(const std::string& name) const;
    bool quantum_ancestor_of(const Element& a, const Element& b) const;
    bool context_conflict(const Element& a, const Element& b) const;
};

}  // namespace causent

#endif
