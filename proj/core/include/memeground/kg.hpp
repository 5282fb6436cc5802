#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace memeground {

enum class KgNodeKind { MediaFrame, Template, MemeInstance, Entity, Literal };

std::string_view to_string(KgNodeKind kind);

// Predicate vocabulary of the edge-list TSV.
namespace kg_predicate {
inline constexpr std::string_view kType = "rdf:type";
inline constexpr std::string_view kTemplateOf = "template_of";  // instance -> template
inline constexpr std::string_view kFrameOf = "frame_of";        // template -> media frame
inline constexpr std::string_view kTitle = "title";
inline constexpr std::string_view kLabel = "label";
inline constexpr std::string_view kAbout = "about";
inline constexpr std::string_view kOrigin = "origin";
inline constexpr std::string_view kTags = "tags";
inline constexpr std::string_view kAltText = "alt_text";
inline constexpr std::string_view kFromImage = "fromImage";
inline constexpr std::string_view kFromCaption = "fromCaption";
inline constexpr std::string_view kFromAbout = "fromAbout";
}  // namespace kg_predicate

struct KgNode {
  std::string node_id;
  KgNodeKind kind = KgNodeKind::Entity;
  /// Literal-valued predicates, values in file order.
  std::map<std::string, std::vector<std::string>> properties;

  /// First value of a literal property, or empty.
  std::string property(std::string_view predicate) const;
};

struct KgEdge {
  std::string edge_id;
  std::string subject;
  std::string predicate;
  std::string object;     // as written in the file (literals keep their quotes)
  bool literal = false;   // object is a value, not a node id

  bool operator==(const KgEdge&) const = default;
};

/// Read-only meme knowledge graph: Media Frame / Template / Meme Instance
/// nodes plus entities, with adjacency by subject and by (predicate, object).
class MemeKg {
 public:
  MemeKg() = default;

  /// Builds a graph from edges. Duplicate (subject, predicate, object)
  /// triples are dropped, keeping the first edge id.
  static MemeKg from_edges(std::vector<KgEdge> edges);

  const KgNode* node(std::string_view node_id) const;
  const std::vector<KgEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::map<std::string, KgNode, std::less<>>& nodes() const noexcept { return nodes_; }

  /// Edges whose subject is `node_id`.
  std::vector<const KgEdge*> out_edges(std::string_view node_id) const;
  /// Subjects of edges (s, predicate, object).
  std::vector<std::string> subjects(std::string_view predicate, std::string_view object) const;

 private:
  std::map<std::string, KgNode, std::less<>> nodes_;
  std::vector<KgEdge> edges_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>, std::less<>> by_pred_obj_;
};

/// Parses a KGTK-style edge list: header "id node1 label node2", tab
/// separated. Objects quoted with ' or " (optionally followed by @lang), and
/// every object of title/label/about/origin/tags/alt_text, are literals; all
/// other objects are node ids. rdf:type objects name the node's class.
/// Throws FormatError with the 1-based row number.
MemeKg load_kg_tsv(const std::filesystem::path& path);
MemeKg parse_kg_tsv(std::string_view text);

/// Edge list back to TSV, edges in stored order.
std::string serialize_kg_tsv(const MemeKg& kg);

std::vector<std::string> templates(const MemeKg& kg);
/// Throws NotFoundError unless template_id is a Template node.
std::vector<std::string> instances_of(const MemeKg& kg, std::string_view template_id);
/// Absent, without error, when the template has no frame link.
std::optional<KgNode> media_frame_of(const MemeKg& kg, std::string_view template_id);

struct MediaFrameInfo {
  std::string about;
  std::string origin;
  std::vector<std::string> tags;

  bool operator==(const MediaFrameInfo&) const = default;
};

struct InstanceInfo {
  std::string instance_id;
  std::string alternative_text;

  bool operator==(const InstanceInfo&) const = default;
};

struct ContextCard {
  std::string template_id;
  std::string template_title;
  std::optional<MediaFrameInfo> media_frame;
  std::vector<InstanceInfo> instances;
  /// provenance predicate (fromImage/fromCaption/fromAbout) -> entity labels
  std::map<std::string, std::vector<std::string>> entities;
  bool frame_missing = true;
};

/// Title, frame fields, instances with alternative text, and entities
/// reached from the template, its instances or its frame through a
/// provenance edge, grouped by provenance. Throws NotFoundError.
ContextCard context_card(const MemeKg& kg, std::string_view template_id);

/// JSON object keyed by the ContextCard field names, 2-space indent.
std::string context_card_json(const ContextCard& card);

}  // namespace memeground
