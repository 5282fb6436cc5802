#include "memeground/kg.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "io.hpp"
#include "memeground/errors.hpp"

namespace memeground {

namespace fs = std::filesystem;
namespace pred = kg_predicate;

std::string_view to_string(KgNodeKind kind) {
  switch (kind) {
    case KgNodeKind::MediaFrame: return "MediaFrame";
    case KgNodeKind::Template: return "Template";
    case KgNodeKind::MemeInstance: return "MemeInstance";
    case KgNodeKind::Entity: return "Entity";
    case KgNodeKind::Literal: return "Literal";
  }
  return "Entity";
}

namespace {

constexpr std::string_view kLiteralPredicates[] = {pred::kTitle, pred::kLabel,  pred::kAbout,
                                                   pred::kOrigin, pred::kTags, pred::kAltText};

bool is_quoted(std::string_view value) {
  return !value.empty() && (value.front() == '"' || value.front() == '\'');
}

// "'text'@en" -> text, "\"text\"" -> text, bare text unchanged.
std::string literal_value(std::string_view raw) {
  if (!is_quoted(raw)) return std::string(raw);
  const char quote = raw.front();
  const auto close = raw.rfind(quote);
  if (close == 0) return std::string(raw.substr(1));
  return std::string(raw.substr(1, close - 1));
}

bool is_literal_object(std::string_view predicate, std::string_view object) {
  if (is_quoted(object)) return true;
  return std::find(std::begin(kLiteralPredicates), std::end(kLiteralPredicates), predicate) !=
         std::end(kLiteralPredicates);
}

std::optional<KgNodeKind> kind_from_class(std::string_view cls) {
  if (const auto colon = cls.rfind(':'); colon != std::string_view::npos) cls = cls.substr(colon + 1);
  if (cls == "MediaFrame") return KgNodeKind::MediaFrame;
  if (cls == "Template") return KgNodeKind::Template;
  if (cls == "MemeInstance") return KgNodeKind::MemeInstance;
  return std::nullopt;
}

const KgNode& require_template(const MemeKg& kg, std::string_view template_id) {
  const KgNode* node = kg.node(template_id);
  if (node == nullptr || node->kind != KgNodeKind::Template)
    throw NotFoundError("no Template node '" + std::string(template_id) + "'");
  return *node;
}

}  // namespace

std::string KgNode::property(std::string_view predicate) const {
  const auto it = properties.find(std::string(predicate));
  return it == properties.end() || it->second.empty() ? std::string{} : it->second.front();
}

MemeKg MemeKg::from_edges(std::vector<KgEdge> edges) {
  MemeKg kg;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (auto& edge : edges) {
    if (!seen.insert({edge.subject, edge.predicate, edge.object}).second) continue;
    edge.literal = edge.predicate != pred::kType && is_literal_object(edge.predicate, edge.object);
    kg.edges_.push_back(std::move(edge));
  }

  auto ensure = [&kg](const std::string& id) -> KgNode& {
    auto it = kg.nodes_.find(id);
    if (it == kg.nodes_.end()) it = kg.nodes_.emplace(id, KgNode{id, KgNodeKind::Entity, {}}).first;
    return it->second;
  };

  // Kinds first so that a node's kind does not depend on row order.
  for (const auto& edge : kg.edges_) {
    KgNode& subject = ensure(edge.subject);
    if (edge.predicate == pred::kType)
      if (const auto kind = kind_from_class(edge.object); kind && subject.kind == KgNodeKind::Entity)
        subject.kind = *kind;
  }
  for (std::size_t i = 0; i < kg.edges_.size(); ++i) {
    const KgEdge& edge = kg.edges_[i];
    kg.by_subject_[edge.subject].push_back(i);
    kg.by_pred_obj_[{edge.predicate, edge.object}].push_back(i);
    if (edge.predicate == pred::kType) continue;
    if (edge.literal) {
      ensure(edge.subject).properties[edge.predicate].push_back(literal_value(edge.object));
    } else {
      ensure(edge.object);
    }
  }
  return kg;
}

const KgNode* MemeKg::node(std::string_view node_id) const {
  const auto it = nodes_.find(node_id);
  return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<const KgEdge*> MemeKg::out_edges(std::string_view node_id) const {
  std::vector<const KgEdge*> out;
  if (const auto it = by_subject_.find(std::string(node_id)); it != by_subject_.end())
    for (const std::size_t i : it->second) out.push_back(&edges_[i]);
  return out;
}

std::vector<std::string> MemeKg::subjects(std::string_view predicate, std::string_view object) const {
  std::vector<std::string> out;
  const auto it = by_pred_obj_.find(std::pair<std::string, std::string>(predicate, object));
  if (it != by_pred_obj_.end())
    for (const std::size_t i : it->second) out.push_back(edges_[i].subject);
  return out;
}

MemeKg parse_kg_tsv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw FormatError("missing header 'id\\tnode1\\tlabel\\tnode2'", 1);
  const auto header = detail::split_tabs(lines.front());
  if (header.size() != 4 || header[0] != "id" || header[1] != "node1" || header[2] != "label" ||
      header[3] != "node2")
    throw FormatError("missing header 'id\\tnode1\\tlabel\\tnode2'", 1);

  std::vector<KgEdge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cols = detail::split_tabs(lines[i]);
    if (cols.size() != 4)
      throw FormatError("expected 4 columns, found " + std::to_string(cols.size()), i + 1);
    if (cols[1].empty() || cols[2].empty()) throw FormatError("empty node1 or label", i + 1);
    edges.push_back({std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), std::string(cols[3]), false});
  }
  return MemeKg::from_edges(std::move(edges));
}

MemeKg load_kg_tsv(const fs::path& path) {
  try {
    return parse_kg_tsv(detail::read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.row());
  }
}

std::string serialize_kg_tsv(const MemeKg& kg) {
  std::string out = "id\tnode1\tlabel\tnode2\n";
  for (const auto& e : kg.edges()) out += e.edge_id + "\t" + e.subject + "\t" + e.predicate + "\t" + e.object + "\n";
  return out;
}

std::vector<std::string> templates(const MemeKg& kg) {
  std::vector<std::string> out;
  for (const auto& [id, node] : kg.nodes())
    if (node.kind == KgNodeKind::Template) out.push_back(id);
  return out;  // std::map iteration is already sorted
}

std::vector<std::string> instances_of(const MemeKg& kg, std::string_view template_id) {
  require_template(kg, template_id);
  std::set<std::string> ids;
  for (auto& id : kg.subjects(pred::kTemplateOf, template_id)) {
    const KgNode* node = kg.node(id);
    if (node != nullptr && node->kind == KgNodeKind::MemeInstance) ids.insert(std::move(id));
  }
  return {ids.begin(), ids.end()};
}

std::optional<KgNode> media_frame_of(const MemeKg& kg, std::string_view template_id) {
  require_template(kg, template_id);
  std::optional<std::string> best;
  for (const KgEdge* edge : kg.out_edges(template_id)) {
    if (edge->predicate != pred::kFrameOf || edge->literal) continue;
    const KgNode* node = kg.node(edge->object);
    if (node != nullptr && node->kind == KgNodeKind::MediaFrame && (!best || edge->object < *best))
      best = edge->object;
  }
  if (!best) return std::nullopt;
  return *kg.node(*best);
}

ContextCard context_card(const MemeKg& kg, std::string_view template_id) {
  const KgNode& tmpl = require_template(kg, template_id);
  ContextCard card;
  card.template_id = std::string(template_id);
  card.template_title = tmpl.property(pred::kTitle);
  if (card.template_title.empty()) card.template_title = card.template_id;

  std::vector<std::string> subgraph{card.template_id};
  for (auto& id : instances_of(kg, template_id)) {
    card.instances.push_back({id, kg.node(id)->property(pred::kAltText)});
    subgraph.push_back(std::move(id));
  }
  if (const auto frame = media_frame_of(kg, template_id)) {
    const auto tags = frame->properties.find(std::string(pred::kTags));
    card.media_frame = MediaFrameInfo{frame->property(pred::kAbout), frame->property(pred::kOrigin),
                                      tags == frame->properties.end() ? std::vector<std::string>{} : tags->second};
    subgraph.push_back(frame->node_id);
  }
  card.frame_missing = !card.media_frame.has_value();

  for (const std::string_view provenance : {pred::kFromImage, pred::kFromCaption, pred::kFromAbout}) {
    std::set<std::string> labels;
    for (const auto& id : subgraph) {
      for (const KgEdge* edge : kg.out_edges(id)) {
        if (edge->predicate != provenance || edge->literal) continue;
        const KgNode* entity = kg.node(edge->object);
        const std::string label = entity ? entity->property(pred::kLabel) : std::string{};
        labels.insert(label.empty() ? edge->object : label);
      }
    }
    if (!labels.empty()) card.entities[std::string(provenance)] = {labels.begin(), labels.end()};
  }
  return card;
}

std::string context_card_json(const ContextCard& card) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["template_id"] = card.template_id;
  j["template_title"] = card.template_title;
  if (card.media_frame) {
    j["media_frame"] = {{"about", card.media_frame->about},
                        {"origin", card.media_frame->origin},
                        {"tags", card.media_frame->tags}};
  } else {
    j["media_frame"] = nullptr;
  }
  j["instances"] = ordered_json::array();
  for (const auto& inst : card.instances)
    j["instances"].push_back({{"instance_id", inst.instance_id}, {"alternative_text", inst.alternative_text}});
  j["entities"] = ordered_json::object();
  for (const auto& [provenance, labels] : card.entities) j["entities"][provenance] = labels;
  j["frame_missing"] = card.frame_missing;
  return j.dump(2) + "\n";
}

}  // namespace memeground
