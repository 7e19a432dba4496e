#include "scirank/taxonomy.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <utility>

#include "scirank/error.hpp"

namespace scirank {

TaxonPath::TaxonPath(std::vector<int> components) : components_(std::move(components)) {
    if (components_.empty())
        throw Error(ErrorKind::Parse, "taxon path must have at least one component");
    for (int c : components_)
        if (c < 1)
            throw Error(ErrorKind::Parse, "taxon path components must be positive");
}

TaxonPath TaxonPath::parse(std::string_view text) {
    if (!text.empty() && text.back() == '.') text.remove_suffix(1);
    if (text.empty()) throw Error(ErrorKind::Parse, "empty taxon index");

    std::vector<int> components;
    std::size_t pos = 0;
    while (true) {
        std::size_t dot = text.find('.', pos);
        std::string_view part = text.substr(pos, dot == std::string_view::npos ? text.npos : dot - pos);
        int value = 0;
        auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc{} || end != part.data() + part.size() || value < 1)
            throw Error(ErrorKind::Parse, "malformed taxon index '" + std::string(text) + "'");
        components.push_back(value);
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return TaxonPath(std::move(components));
}

TaxonPath TaxonPath::parent() const {
    if (components_.size() <= 1)
        throw Error(ErrorKind::UnknownParent, "layer-1 taxon " + str() + " has no parent path");
    return TaxonPath(std::vector<int>(components_.begin(), components_.end() - 1));
}

TaxonPath TaxonPath::child(int index) const {
    std::vector<int> c = components_;
    c.push_back(index);
    return TaxonPath(std::move(c));
}

bool TaxonPath::is_ancestor_of(const TaxonPath& other) const {
    return components_.size() < other.components_.size() &&
           std::equal(components_.begin(), components_.end(), other.components_.begin());
}

std::string TaxonPath::str() const {
    std::string out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(components_[i]);
    }
    return out;
}

std::string Violation::describe() const {
    std::string kind_name;
    switch (kind) {
        case Kind::DuplicateTaxon: kind_name = "DuplicateTaxon"; break;
        case Kind::OrphanTaxon: kind_name = "OrphanTaxon"; break;
        case Kind::TerminalFlag: kind_name = "TerminalFlag"; break;
    }
    std::string out = kind_name + "(" + path.str() + ")";
    if (line) out += " at line " + std::to_string(line);
    return out;
}

namespace {

constexpr std::string_view kBlank = " \t\r";

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(kBlank);
    if (b == s.npos) return {};
    auto e = s.find_last_not_of(kBlank);
    return s.substr(b, e - b + 1);
}

void derive_terminal_flags(Taxonomy::NodeMap& nodes) {
    for (auto& [path, node] : nodes) node.terminal = true;
    for (const auto& [path, node] : nodes)
        if (!path.is_root_level()) {
            auto it = nodes.find(path.parent());
            if (it != nodes.end()) it->second.terminal = false;
        }
}

}  // namespace

std::vector<TaxonEntry> parse_taxonomy_entries(std::string_view text) {
    std::vector<TaxonEntry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
        pos = nl == text.npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        auto sep = line.find_first_of(" \t");
        std::string_view index = line.substr(0, sep);
        std::string_view name = sep == line.npos ? std::string_view{} : trim(line.substr(sep));
        if (name.empty())
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": missing taxon name");
        try {
            entries.push_back({TaxonPath::parse(index), std::string(name), line_no});
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return entries;
}

std::vector<Violation> validate(const std::vector<TaxonEntry>& entries) {
    std::vector<Violation> out;
    std::set<TaxonPath> seen;
    for (const auto& e : entries)
        if (!seen.insert(e.path).second)
            out.push_back({Violation::Kind::DuplicateTaxon, e.path, e.line});
    for (const auto& e : entries)
        if (!e.path.is_root_level() && !seen.count(e.path.parent()))
            out.push_back({Violation::Kind::OrphanTaxon, e.path, e.line});
    return out;
}

std::vector<Violation> validate(const Taxonomy& taxonomy) {
    std::vector<Violation> out;
    const auto& nodes = taxonomy.nodes_;
    for (const auto& [path, node] : nodes) {
        if (!path.is_root_level() && !nodes.count(path.parent()))
            out.push_back({Violation::Kind::OrphanTaxon, path, 0});
        // In path order, the first strict descendant (if any) comes right after.
        auto next = nodes.upper_bound(path);
        bool has_child = next != nodes.end() && path.is_ancestor_of(next->first);
        if (node.terminal == has_child)
            out.push_back({Violation::Kind::TerminalFlag, path, 0});
    }
    return out;
}

Taxonomy Taxonomy::from_entries(const std::vector<TaxonEntry>& entries) {
    auto violations = validate(entries);
    if (!violations.empty()) {
        const auto& v = violations.front();
        auto kind = v.kind == Violation::Kind::DuplicateTaxon ? ErrorKind::DuplicateTaxon
                                                              : ErrorKind::OrphanTaxon;
        throw Error(kind, v.describe());
    }
    Taxonomy t;
    for (const auto& e : entries) t.nodes_.emplace(e.path, TaxonNode{e.name, true});
    derive_terminal_flags(t.nodes_);
    return t;
}

Taxonomy parse_taxonomy(std::string_view text) {
    return Taxonomy::from_entries(parse_taxonomy_entries(text));
}

const TaxonNode& Taxonomy::at(const TaxonPath& path) const {
    auto it = nodes_.find(path);
    if (it == nodes_.end()) throw Error(ErrorKind::UnknownTaxon, "unknown taxon " + path.str());
    return it->second;
}

std::vector<TaxonPath> Taxonomy::children(const TaxonPath& parent) const {
    std::vector<TaxonPath> out;
    for (auto it = nodes_.upper_bound(parent); it != nodes_.end() && parent.is_ancestor_of(it->first); ++it)
        if (it->first.layer() == parent.layer() + 1) out.push_back(it->first);
    return out;
}

std::vector<TaxonPath> Taxonomy::roots() const {
    std::vector<TaxonPath> out;
    for (const auto& [path, node] : nodes_)
        if (path.is_root_level()) out.push_back(path);
    return out;
}

std::size_t Taxonomy::depth() const {
    std::size_t d = 0;
    for (const auto& [path, node] : nodes_) d = std::max(d, path.layer());
    return d;
}

std::string serialize(const Taxonomy& taxonomy) {
    std::ostringstream os;
    for (const auto& [path, node] : taxonomy.nodes()) os << path.str() << ' ' << node.name << '\n';
    return os.str();
}

Taxonomy add_leaf(const Taxonomy& taxonomy, const TaxonPath& parent, std::string name) {
    if (!taxonomy.contains(parent))
        throw Error(ErrorKind::UnknownParent, "unknown parent taxon " + parent.str());

    std::set<int> used;
    for (const auto& c : taxonomy.children(parent)) used.insert(c.components().back());
    int index = 1;
    while (used.count(index)) ++index;

    Taxonomy out = taxonomy;
    out.nodes_.emplace(parent.child(index), TaxonNode{std::move(name), true});
    out.nodes_[parent].terminal = false;
    return out;
}

}  // namespace scirank
