#include "bapred/io.hpp"

#include <fstream>
#include <sstream>

namespace bapred {

namespace {

Json set_to_json(const NodeSet& s) {
  Json a = Json::array();
  for (auto id : s) a.push_back(id.value);
  return a;
}

NodeSet set_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array of node ids");
  std::vector<NodeId> ids;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DomainError(std::string(what) + " must contain integers");
    ids.push_back(NodeId{v.get<std::int32_t>()});
  }
  return NodeSet(std::move(ids));
}

Bit bit_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw DomainError(std::string(what) + " must be 0 or 1");
  return bit_from_int(j.get<int>());
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return parse_rational(j.dump());
  throw DomainError("alpha must be a number or a string such as \"4/5\"");
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

}  // namespace

Json adversary_to_json(const AdversarySpec& a) {
  Json j;
  j["name"] = a.name();
  switch (a.kind) {
    case AdversaryKind::ReplayHonest:
      if (a.spoof_prediction) j["spoof_prediction"] = set_to_json(*a.spoof_prediction);
      break;
    case AdversaryKind::SplitBrain:
      if (a.part_a) j["partition_a"] = set_to_json(*a.part_a);
      if (a.part_b) j["partition_b"] = set_to_json(*a.part_b);
      j["value_a"] = to_int(a.value_a);
      j["value_b"] = to_int(a.value_b);
      break;
    case AdversaryKind::Personas: {
      Json labels = Json::array();
      for (const auto& l : a.labels) {
        Json lj;
        lj["members"] = set_to_json(l.members);
        lj["input"] = to_int(l.input);
        lj["audience"] = set_to_json(l.audience);
        if (l.prediction) lj["prediction"] = set_to_json(*l.prediction);
        labels.push_back(std::move(lj));
      }
      j["labels"] = std::move(labels);
      break;
    }
    default: break;
  }
  return j;
}

AdversarySpec adversary_from_json(const Json& j) {
  if (j.is_string()) return parse_adversary(j.get<std::string>());
  if (!j.is_object()) throw DomainError("adversary must be a name or an object");
  std::string name = require(j, "name").get<std::string>();
  AdversarySpec a;
  if (name == "personas") {
    a.kind = AdversaryKind::Personas;
    for (const auto& lj : require(j, "labels")) {
      PersonaLabel l;
      l.members = set_from_json(require(lj, "members"), "members");
      l.input = bit_from_json(require(lj, "input"), "input");
      l.audience = set_from_json(require(lj, "audience"), "audience");
      if (lj.contains("prediction")) l.prediction = set_from_json(lj.at("prediction"), "prediction");
      a.labels.push_back(std::move(l));
    }
    return a;
  }
  a = parse_adversary(name);
  if (a.kind == AdversaryKind::ReplayHonest && j.contains("spoof_prediction"))
    a.spoof_prediction = set_from_json(j.at("spoof_prediction"), "spoof_prediction");
  if (a.kind == AdversaryKind::SplitBrain) {
    if (j.contains("partition_a") != j.contains("partition_b"))
      throw DomainError("split_brain needs both partitions or neither");
    if (j.contains("partition_a")) {
      a.part_a = set_from_json(j.at("partition_a"), "partition_a");
      a.part_b = set_from_json(j.at("partition_b"), "partition_b");
    }
    if (j.contains("value_a")) a.value_a = bit_from_json(j.at("value_a"), "value_a");
    if (j.contains("value_b")) a.value_b = bit_from_json(j.at("value_b"), "value_b");
  }
  return a;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (!s.label.empty()) j["label"] = s.label;
  j["protocol"] = to_string(s.protocol);
  j["mode"] = to_string(s.mode);
  j["alpha"] = format_rational(s.alpha);
  j["n"] = s.n();
  j["faulty"] = set_to_json(s.config.faulty);
  Json inputs = Json::object();
  for (const auto& [id, b] : s.config.inputs) inputs[std::to_string(id.value)] = to_int(b);
  j["inputs"] = std::move(inputs);
  if (s.local_prediction) {
    Json lp = Json::array();
    for (const auto& p : s.prediction.per_node) lp.push_back(set_to_json(p));
    j["local_prediction"] = std::move(lp);
  } else {
    j["prediction"] = set_to_json(s.prediction.per_node.empty() ? NodeSet{} : s.prediction.per_node.front());
  }
  j["adversary"] = adversary_to_json(s.adversary);
  j["seed"] = s.seed;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw DomainError("scenario must be a JSON object");
    int version = require(j, "schema_version").get<int>();
    if (version != kSchemaVersion) throw DomainError("unsupported schema_version " + std::to_string(version));
    Scenario s;
    if (j.contains("label")) s.label = j.at("label").get<std::string>();
    s.protocol = parse_protocol_choice(require(j, "protocol").get<std::string>());
    s.mode = j.contains("mode") ? parse_channel_mode(j.at("mode").get<std::string>()) : mode_of(s.protocol);
    s.alpha = j.contains("alpha") ? rational_from_json(j.at("alpha")) : Rational(1);
    s.config.n = require(j, "n").get<int>();
    s.config.faulty = set_from_json(require(j, "faulty"), "faulty");
    const Json& inputs = require(j, "inputs");
    if (inputs.is_object()) {
      for (const auto& [key, value] : inputs.items()) {
        std::size_t used = 0;
        int id = std::stoi(key, &used);
        if (used != key.size()) throw DomainError("input key '" + key + "' is not a node id");
        s.config.inputs[NodeId{id}] = bit_from_json(value, "input");
      }
    } else if (inputs.is_array()) {
      // Array form: one entry per node, null for faulty nodes.
      int id = 1;
      for (const auto& v : inputs) {
        if (!v.is_null()) s.config.inputs[NodeId{id}] = bit_from_json(v, "input");
        ++id;
      }
    } else {
      throw DomainError("inputs must be an object or an array");
    }
    if (j.contains("local_prediction")) {
      s.local_prediction = true;
      for (const auto& p : j.at("local_prediction")) s.prediction.per_node.push_back(set_from_json(p, "local_prediction"));
    } else {
      NodeSet p = j.contains("prediction") ? set_from_json(j.at("prediction"), "prediction") : NodeSet::range(1, s.config.n);
      s.prediction = replicate(p, s.config.n);
    }
    s.adversary = j.contains("adversary") ? adversary_from_json(j.at("adversary")) : AdversarySpec{};
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("malformed scenario: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DomainError(std::string("malformed scenario: ") + e.what());
  }
}

Json outcome_to_json(const Scenario& s, const ScenarioResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (!s.label.empty()) j["label"] = s.label;
  j["protocol"] = to_string(s.protocol);
  j["mode"] = to_string(s.mode);
  j["alpha"] = format_rational(s.alpha);
  j["n"] = s.n();
  j["f"] = s.config.f();
  j["eta"] = s.error();
  j["adversary"] = s.adversary.name();
  j["seed"] = s.seed;
  Json d = Json::object();
  for (const auto& [id, b] : r.outcome.decisions) d[std::to_string(id.value)] = to_int(b);
  j["decisions"] = std::move(d);
  j["decided_round"] = r.outcome.decided_round;
  j["rounds"] = r.rounds;
  j["agreement"] = r.outcome.agreement;
  j["validity"] = r.outcome.validity;
  j["termination"] = r.outcome.termination;
  j["rejected_forgeries"] = r.rejected_forgeries;
  j["ledger_audit_ok"] = r.ledger_audit_ok;
  return j;
}

Json message_to_json(const Message& m) {
  Json j;
  j["round"] = m.round;
  j["from"] = m.sender.value;
  j["to"] = m.receiver.value;
  j["tag"] = to_string(m.payload.tag);
  j["instance"] = m.payload.instance;
  j["step"] = m.payload.step;
  j["value"] = m.payload.value;
  if (m.chain) {
    Json sigs = Json::array();
    for (const auto& s : *m.chain) sigs.push_back(Json::array({s.signer.value, hex64(s.token)}));
    j["signatures"] = std::move(sigs);
  }
  return j;
}

Json transcripts_to_json(const std::vector<Transcript>& transcripts) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json nodes = Json::array();
  for (const auto& t : transcripts) {
    Json tj;
    tj["node"] = t.node.value;
    tj["honest"] = t.honest;
    Json rounds = Json::array();
    for (const auto& r : t.rounds) {
      Json rj;
      rj["round"] = r.round;
      Json sent = Json::array();
      for (const auto& m : r.sent) sent.push_back(message_to_json(m));
      Json recv = Json::array();
      for (const auto& m : r.received) recv.push_back(message_to_json(m));
      rj["sent"] = std::move(sent);
      rj["received"] = std::move(recv);
      rounds.push_back(std::move(rj));
    }
    tj["rounds"] = std::move(rounds);
    nodes.push_back(std::move(tj));
  }
  j["transcripts"] = std::move(nodes);
  return j;
}

Json report_to_json(const SuiteReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  j["runs"] = report.runs;
  Json a = Json::array();
  for (const auto& x : report.assertions) {
    Json aj;
    aj["name"] = x.name;
    aj["passed"] = x.passed;
    aj["detail"] = x.detail;
    a.push_back(std::move(aj));
  }
  j["assertions"] = std::move(a);
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace bapred
