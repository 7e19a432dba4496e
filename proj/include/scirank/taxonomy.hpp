#ifndef SCIRANK_TAXONOMY_HPP
#define SCIRANK_TAXONOMY_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scirank {

/// Dotted integer index of a taxon, e.g. 5.2.1.2.4. The layer of a taxon is
/// the number of components.
class TaxonPath {
public:
    TaxonPath() = default;
    explicit TaxonPath(std::vector<int> components);

    /// Accepts an optional trailing dot ("5.2.3.7.5."). Throws Error(Parse).
    static TaxonPath parse(std::string_view text);

    const std::vector<int>& components() const noexcept { return components_; }
    std::size_t layer() const noexcept { return components_.size(); }
    bool is_root_level() const noexcept { return components_.size() == 1; }

    TaxonPath parent() const;
    TaxonPath child(int index) const;
    bool is_ancestor_of(const TaxonPath& other) const;

    std::string str() const;

    auto operator<=>(const TaxonPath&) const = default;

private:
    std::vector<int> components_;
};

inline std::size_t layer_of(const TaxonPath& path) noexcept { return path.layer(); }

struct TaxonNode {
    std::string name;
    bool terminal = true;
};

/// One line of a taxonomy listing, before structural checks.
struct TaxonEntry {
    TaxonPath path;
    std::string name;
    std::size_t line = 0;
};

struct Violation {
    enum class Kind { DuplicateTaxon, OrphanTaxon, TerminalFlag };
    Kind kind;
    TaxonPath path;
    std::size_t line = 0;

    std::string describe() const;
};

/// Rooted tree of taxons keyed by path. The root is implicit; layer-1 taxons
/// are its children. Values are immutable once built.
class Taxonomy {
public:
    using NodeMap = std::map<TaxonPath, TaxonNode>;

    Taxonomy() = default;

    /// Throws Error(DuplicateTaxon) or Error(OrphanTaxon) on the first breach.
    static Taxonomy from_entries(const std::vector<TaxonEntry>& entries);

    bool contains(const TaxonPath& path) const { return nodes_.count(path) != 0; }
    const TaxonNode& at(const TaxonPath& path) const;
    std::vector<TaxonPath> children(const TaxonPath& parent) const;
    std::vector<TaxonPath> roots() const;

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::size_t depth() const;
    const NodeMap& nodes() const noexcept { return nodes_; }

private:
    friend Taxonomy add_leaf(const Taxonomy&, const TaxonPath&, std::string);
    friend std::vector<Violation> validate(const Taxonomy&);

    NodeMap nodes_;
};

/// Syntax-only parse. Blank lines and lines starting with '#' are skipped;
/// leading indentation is ignored. Throws Error(Parse) naming the line.
std::vector<TaxonEntry> parse_taxonomy_entries(std::string_view text);

Taxonomy parse_taxonomy(std::string_view text);

/// Canonical listing: one `<path> <name>` line per node in path order.
std::string serialize(const Taxonomy& taxonomy);

/// New taxonomy with `name` appended under `parent` at the smallest unused
/// child index. Throws Error(UnknownParent).
Taxonomy add_leaf(const Taxonomy& taxonomy, const TaxonPath& parent, std::string name);

std::vector<Violation> validate(const std::vector<TaxonEntry>& entries);
std::vector<Violation> validate(const Taxonomy& taxonomy);

}  // namespace scirank

#endif  // SCIRANK_TAXONOMY_HPP
