// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/simulation.hpp"

#include <algorithm>
#include <sstream>

namespace eclipsim {

namespace {

constexpr uint64_t kTagLatency = 0x6c617465;   // "late"
constexpr uint64_t kTagChurn = 0x63687572;     // "chur"
constexpr uint64_t kTagReval = 0x7265766c;     // "revl"
constexpr uint64_t kTagRrn = 0x7272616e;       // "rran"
constexpr uint64_t kTagTarget = 0x74676574;    // "tget"
constexpr uint64_t kTagDial = 0x6469616c;      // "dial"
constexpr uint64_t kTagSched = 0x73636564;     // "sced"
constexpr uint64_t kTagVictim = 0x76696374;    // "vict"
constexpr uint64_t kTagHonest = 0x686f6e65;    // "hone"
constexpr uint64_t kTagBoot = 0x626f6f74;      // "boot"
constexpr uint64_t kTagAttack = 0x61747461;    // "atta"
constexpr uint64_t kTagAmbient = 0x616d6269;   // "ambi"

const char* direction_str(Direction d) { return d == Direction::In ? "in" : "out"; }

const char* provenance_str(Provenance p) {
    switch (p) {
        case Provenance::Table: return "table";
        case Provenance::Buffer: return "buffer";
        case Provenance::Inbound: return "inbound";
    }
    return "?";
}

const char* add_outcome_str(AddOutcome o) {
    switch (o) {
        case AddOutcome::Bumped: return "bumped";
        case AddOutcome::Added: return "added";
        case AddOutcome::ReplacementAdded: return "replacement";
        case AddOutcome::RejectedSubnet: return "rejected_subnet";
        case AddOutcome::Noop: return "noop";
    }
    return "?";
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg),
      rng_latency_(Rng(cfg.seed).child(kTagLatency)),
      rng_churn_(Rng(cfg.seed).child(kTagChurn)),
      rng_reval_(Rng(cfg.seed).child(kTagReval)),
      rng_rrn_(Rng(cfg.seed).child(kTagRrn)),
      rng_target_(Rng(cfg.seed).child(kTagTarget)),
      rng_dial_(Rng(cfg.seed).child(kTagDial)),
      rng_sched_(Rng(cfg.seed).child(kTagSched)),
      rng_ambient_(Rng(cfg.seed).child(kTagAmbient)) {
    cfg_.validate();
    trace_.attack_start_ns = cfg_.attack ? cfg_.attack_start_ns() : 0;
    trace_.outcome.seed = cfg_.seed;

    setup_population();
    if (cfg_.attack) setup_attack_plan();

    // The victim's clock starts now: revalidation, the immediate table
    // refresh, ambient discovery pings, the first outbound fill, and the
    // (possibly delayed) attack behaviors.
    schedule(static_cast<SimTime>(rng_reval_.exponential(5.0) * 1e9), {.kind = EvKind::Revalidate});
    schedule(0, {.kind = EvKind::RefreshTick});
    schedule_ambient_ping();
    if (cfg_.attack) schedule(cfg_.attack_start_ns(), {.kind = EvKind::AttackStart});
    request_fill();
}

void Simulation::setup_population() {
    Rng victim_rng = Rng(cfg_.seed).child(kTagVictim);
    victim_rec_ = NodeRecord{generate_id(victim_rng), IPv4::from_octets(10, 0, 0, 1), 30303, 30303};
    victim_table_.emplace(victim_rec_.id);
    victim_peers_.emplace(victim_rec_.id, SlotConfig{cfg_.geth_variant.max_peers});
    if (cfg_.geth_variant.inbound_throttle)
        victim_peers_->set_inbound_throttle(
            true, static_cast<SimTime>(cfg_.geth_variant.throttle_window_s * 1e9));

    Rng honest_rng = Rng(cfg_.seed).child(kTagHonest);
    honest_.reserve(static_cast<size_t>(cfg_.honest_count));
    for (int i = 0; i < cfg_.honest_count; ++i) {
        NodeRecord rec{generate_id(honest_rng),
                       IPv4::from_octets(10, static_cast<uint8_t>(1 + i / 200),
                                         static_cast<uint8_t>(i % 200), 1),
                       30303, 30303};
        honest_.push_back(HonestNode{rec, DiscoveryTable(rec.id)});
        honest_index_.emplace(rec.id, honest_.size() - 1);
    }

    // Each honest node knows a few hundred random peers; that is enough for
    // lookups across the honest overlay to converge.
    size_t acquaintances = std::min<size_t>(static_cast<size_t>(std::max(cfg_.honest_count - 1, 0)), 256);
    for (size_t i = 0; i < honest_.size(); ++i) {
        Rng node_rng = honest_rng.child(i);
        for (size_t k = 0; k < acquaintances; ++k) {
            size_t j = node_rng.bounded(honest_.size());
            if (j == i) continue;
            honest_[i].table.add_seen(honest_[j].rec);
        }
    }

    // Victim bootstrap: a handful of honest records survive a restart. The
    // bootstrap exchange is mutual, so those nodes know the victim too.
    knows_victim_.assign(honest_.size(), 0);
    Rng boot_rng = Rng(cfg_.seed).child(kTagBoot);
    std::vector<size_t> order(honest_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int b = 0; b < cfg_.bootstrap_count && static_cast<size_t>(b) < order.size(); ++b) {
        size_t j = b + boot_rng.bounded(order.size() - static_cast<size_t>(b));
        std::swap(order[static_cast<size_t>(b)], order[j]);
        size_t pick = order[static_cast<size_t>(b)];
        victim_table_->add_seen(honest_[pick].rec);
        honest_[pick].table.add_seen(victim_rec_);
        mark_knows_victim(pick);
    }
}

void Simulation::mark_knows_victim(size_t honest_index) {
    if (knows_victim_[honest_index]) return;
    knows_victim_[honest_index] = 1;
    knowers_.push_back(honest_index);
}

void Simulation::schedule_ambient_ping() {
    if (honest_.empty()) return;
    double mean_s = knowers_.empty()
                        ? 5.0
                        : cfg_.honest_ping_interval_s / static_cast<double>(knowers_.size());
    schedule(now_ + static_cast<SimTime>(rng_ambient_.exponential(mean_s) * 1e9),
             {.kind = EvKind::AmbientPing});
}

void Simulation::setup_attack_plan() {
    Rng attack_rng = Rng(cfg_.seed).child(kTagAttack);
    AttackPlan plan = prepare_attack(victim_rec_.id, cfg_.attack->pool_size, attack_rng, *cfg_.attack);
    attacker_.emplace(std::move(plan));
}

void Simulation::schedule(SimTime at, Event ev) {
    ev.at = at;
    ev.seq = ++seq_;
    queue_.push(std::move(ev));
}

SimTime Simulation::one_way_latency() { return cfg_.latency_model.sample(rng_latency_); }

bool Simulation::adversarial_id(const NodeId& id) const {
    return attacker_ && attacker_->owns(id);
}

const Simulation::HonestNode* Simulation::honest_by_id(const NodeId& id) const {
    auto it = honest_index_.find(id);
    return it == honest_index_.end() ? nullptr : &honest_[it->second];
}

Simulation::HonestNode* Simulation::honest_by_id(const NodeId& id) {
    auto it = honest_index_.find(id);
    return it == honest_index_.end() ? nullptr : &honest_[it->second];
}

void Simulation::emit(TraceEvent ev) {
    if (!cfg_.full_trace &&
        (ev.kind == TraceKind::SybilPing || ev.kind == TraceKind::Revalidate ||
         ev.kind == TraceKind::TableAdd))
        return;
    ev.time = now_;
    trace_.events.push_back(std::move(ev));
}

void Simulation::eclipse_check() {
    if (!attack_active_ || eclipsed_) return;
    if (!victim_peers_->is_eclipsed([&](const NodeId& id) { return adversarial_id(id); })) return;
    eclipsed_ = true;
    trace_.outcome.eclipsed = true;
    trace_.outcome.eclipse_time_ns = now_;
    emit({.kind = TraceKind::Eclipse});
}

// Slot-freeing events request a fill; the pass itself runs once per
// timestamp after every co-timed event has settled, the way the dialer loop
// observes a batch of task completions at once.
void Simulation::request_fill() {
    if (fill_pass_scheduled_ || eclipsed_) return;
    fill_pass_scheduled_ = true;
    schedule(now_, {.kind = EvKind::FillPass});
}

void Simulation::fill_pass() {
    if (eclipsed_) return;
    auto plan = victim_peers_->fill_outbound(*victim_table_, rng_rrn_,
                                             cfg_.geth_variant.read_random_mode);
    for (const auto& d : plan.dials) launch_dial(d);
    if (plan.start_lookup) maybe_start_lookup();
}

void Simulation::launch_dial(const DialDecision& d) {
    bool success;
    if (adversarial_id(d.peer.id)) {
        success = true;  // sybil endpoints always complete the handshake
    } else if (honest_by_id(d.peer.id) != nullptr) {
        success = rng_dial_.next_double() >= cfg_.dial_failure_prob;
    } else {
        success = false;  // nothing answers at that endpoint
    }
    // Successful dials resolve after the handshake round trip; failures eat
    // the connect timeout before the slot frees up again.
    SimTime resolve_at =
        success ? now_ + rtt() : now_ + static_cast<SimTime>(cfg_.connect_timeout_s * 1e9);
    schedule(resolve_at,
             {.kind = EvKind::DialResolve, .peer = d.peer, .provenance = d.provenance,
              .flag = success});
}

void Simulation::maybe_start_lookup() {
    if (eclipsed_) return;
    if (lookup_) {
        dialer_wants_lookup_ = true;
        return;
    }
    if (now_ < next_lookup_ok_) {
        if (!fill_retry_scheduled_) {
            fill_retry_scheduled_ = true;
            schedule(next_lookup_ok_, {.kind = EvKind::FillRetry});
        }
        return;
    }
    start_lookup(random_target(rng_target_), false);
}

void Simulation::start_lookup(const NodeId& target, bool refresh) {
    lookup_.emplace(LookupState{
        LookupEngine(victim_rec_.id, target, victim_table_->closest_known(target, kBucketSize)),
        ++lookup_gen_, 0, target, refresh});
    emit({.kind = TraceKind::LookupStart, .target = target});
    begin_lookup_round();
}

void Simulation::pump_refresh() {
    if (lookup_ || refresh_targets_.empty() || eclipsed_) return;
    NodeId target = refresh_targets_.front();
    refresh_targets_.erase(refresh_targets_.begin());
    start_lookup(target, true);
}

void Simulation::begin_lookup_round() {
    auto pending = lookup_->engine.pending_queries();
    SimTime deadline = static_cast<SimTime>(cfg_.udp_timeout_ms * 1e6);
    for (const auto& q : pending) {
        lookup_->engine.mark_queried(q.id);
        std::vector<NodeRecord> answer;
        bool answers = false;
        if (adversarial_id(q.id)) {
            answer = attacker_->poison_findnode(lookup_->target, cfg_.neighbors_limit);
            answers = true;
        } else if (auto it = honest_index_.find(q.id); it != honest_index_.end()) {
            HonestNode& h = honest_[it->second];
            answer = handle_findnode(h.table, lookup_->target, cfg_.neighbors_limit);
            h.table.add_seen(victim_rec_);  // the request itself is contact
            mark_knows_victim(it->second);
            answers = true;
        }
        SimTime roundtrip = rtt();
        ++lookup_->outstanding;
        if (answers && roundtrip <= deadline) {
            schedule(now_ + roundtrip,
                     {.kind = EvKind::LookupReply, .peer = q, .payload = std::move(answer),
                      .gen = lookup_->gen});
        } else {
            schedule(now_ + deadline, {.kind = EvKind::LookupTimeout, .peer = q, .gen = lookup_->gen});
        }
    }
    if (lookup_->outstanding == 0) advance_lookup();
}

void Simulation::advance_lookup() {
    if (!lookup_->engine.finish_round()) {
        begin_lookup_round();
        return;
    }
    LookupResult result = lookup_->engine.result();
    bool was_refresh = lookup_->refresh;
    int adversarial = 0;
    for (const auto& r : result.nodes)
        if (adversarial_id(r.id)) ++adversarial;
    emit({.kind = TraceKind::LookupDone, .target = result.target, .rounds = result.rounds,
          .adversarial = adversarial, .result_size = static_cast<int>(result.nodes.size())});
    if (!was_refresh) {
        victim_peers_->push_lookup_results(result.nodes);
        next_lookup_ok_ = now_ + (result.nodes.empty() ? 10 : 1) * kNsPerSec;
    }
    lookup_.reset();
    pump_refresh();
    if (!lookup_ && dialer_wants_lookup_) {
        dialer_wants_lookup_ = false;
        maybe_start_lookup();
    }
    request_fill();
}

void Simulation::start_attack() {
    attack_active_ = true;
    emit({.kind = TraceKind::AttackStart});
    const auto& plan = attacker_->plan();
    SimTime interval = static_cast<SimTime>(plan.ping_interval_s * 1e9);
    int j = 0;
    for (const auto& [distance, rec] : plan.bucket_sybils) {
        (void)rec;
        SimTime first = now_ + static_cast<SimTime>(
                                   (j + rng_sched_.next_double()) / kBucketCount *
                                   static_cast<double>(interval));
        schedule(first, {.kind = EvKind::SybilPing, .index = j});
        ++j;
    }
    const auto& fillers = attacker_->fillers();
    SimTime spread = 2 * kNsPerSec / std::max<SimTime>(1, static_cast<SimTime>(fillers.size()));
    for (size_t i = 0; i < fillers.size(); ++i) {
        schedule(now_ + 50 * kNsPerMs + static_cast<SimTime>(i) * spread +
                     static_cast<SimTime>(rng_sched_.next_double() * 50e6),
                 {.kind = EvKind::FillerAttempt, .index = static_cast<int>(i)});
    }
}

void Simulation::filler_attempt(int index) {
    if (eclipsed_) return;
    const NodeRecord& rec = attacker_->fillers()[static_cast<size_t>(index)];
    auto outcome = victim_peers_->accept_inbound(rec, now_, kNeverEnds);
    switch (outcome) {
        case AcceptOutcome::Accepted:
            emit({.kind = TraceKind::Connect, .peer = rec.id, .direction = Direction::In,
                  .provenance = Provenance::Inbound});
            eclipse_check();
            break;
        case AcceptOutcome::RejectedFull:
            parked_fillers_.push_back(index);  // try again when a slot frees
            break;
        case AcceptOutcome::RejectedThrottled: {
            SimTime window = static_cast<SimTime>(cfg_.geth_variant.throttle_window_s * 1e9);
            schedule(now_ + window + static_cast<SimTime>(rng_sched_.next_double() * 1e9),
                     {.kind = EvKind::FillerAttempt, .index = index});
            break;
        }
    }
}

void Simulation::wake_parked_fillers() {
    if (!attack_active_) return;
    for (size_t i = 0; i < parked_fillers_.size(); ++i) {
        schedule(now_ + 10 * kNsPerMs + static_cast<SimTime>(i) * 5 * kNsPerMs +
                     static_cast<SimTime>(rng_sched_.next_double() * 5e6),
                 {.kind = EvKind::FillerAttempt, .index = parked_fillers_[i]});
    }
    parked_fillers_.clear();
}

void Simulation::complete_disconnect(const Event& ev) {
    // The connection may have been replaced since the disconnect was booked.
    const auto& conns = victim_peers_->connections();
    auto it = std::find_if(conns.begin(), conns.end(), [&](const Connection& c) {
        return c.peer.id == ev.peer.id && c.established_at == ev.stamp;
    });
    if (it == conns.end()) return;
    Direction dir = it->direction;
    Provenance prov = it->provenance;
    victim_peers_->on_disconnect(ev.peer.id, now_);
    emit({.kind = TraceKind::Disconnect, .peer = ev.peer.id, .direction = dir,
          .provenance = prov});
    if (dir == Direction::Out) request_fill();
    else wake_parked_fillers();
}

void Simulation::handle(const Event& ev) {
    switch (ev.kind) {
        case EvKind::AttackStart:
            start_attack();
            break;

        case EvKind::SybilPing: {
            int j = 0;
            for (const auto& [distance, rec] : attacker_->plan().bucket_sybils) {
                if (j++ != ev.index) continue;
                auto outcome = victim_table_->add_seen(rec);
                emit({.kind = TraceKind::SybilPing, .peer = rec.id, .add_outcome = outcome});
                break;
            }
            SimTime interval =
                static_cast<SimTime>(attacker_->plan().ping_interval_s * 1e9);
            SimTime next = now_ + static_cast<SimTime>(
                                      (0.8 + 0.4 * rng_sched_.next_double()) *
                                      static_cast<double>(interval));
            schedule(next, {.kind = EvKind::SybilPing, .index = ev.index});
            break;
        }

        case EvKind::FillerAttempt:
            filler_attempt(ev.index);
            break;

        case EvKind::Revalidate: {
            auto outcome = victim_table_->revalidate_step(rng_reval_, [&](const NodeRecord& r) {
                bool reachable = adversarial_id(r.id) || honest_by_id(r.id) != nullptr;
                if (!reachable) return false;
                return rtt() <= static_cast<SimTime>(cfg_.udp_timeout_ms * 1e6);
            });
            if (outcome.probed)
                emit({.kind = TraceKind::Revalidate, .peer = outcome.probed_record.id,
                      .alive = outcome.alive});
            schedule(now_ + static_cast<SimTime>(rng_reval_.exponential(5.0) * 1e9),
                     {.kind = EvKind::Revalidate});
            break;
        }

        case EvKind::DialResolve: {
            if (!ev.flag) {
                victim_peers_->dial_failed(ev.peer.id);
                request_fill();
                break;
            }
            SimTime end = adversarial_id(ev.peer.id)
                              ? kNeverEnds
                              : now_ + cfg_.churn_model.sample(rng_churn_);
            auto conn = victim_peers_->dial_succeeded(ev.peer, now_, end, ev.provenance);
            if (!conn) {
                request_fill();
                break;
            }
            emit({.kind = TraceKind::Connect, .peer = ev.peer.id, .direction = Direction::Out,
                  .provenance = ev.provenance});
            if (end != kNeverEnds)
                schedule(end, {.kind = EvKind::Disconnect, .peer = ev.peer, .stamp = now_});
            eclipse_check();
            break;
        }

        case EvKind::Disconnect:
            complete_disconnect(ev);
            break;

        case EvKind::LookupReply: {
            if (!lookup_ || lookup_->gen != ev.gen) break;
            lookup_->engine.record_response(ev.peer.id, ev.payload);
            auto outcome = victim_table_->add_seen(ev.peer);  // it answered: contact
            emit({.kind = TraceKind::TableAdd, .peer = ev.peer.id, .add_outcome = outcome});
            if (--lookup_->outstanding == 0) advance_lookup();
            break;
        }

        case EvKind::LookupTimeout: {
            if (!lookup_ || lookup_->gen != ev.gen) break;
            lookup_->engine.record_response(ev.peer.id, {});
            if (--lookup_->outstanding == 0) advance_lookup();
            break;
        }

        case EvKind::FillRetry:
            fill_retry_scheduled_ = false;
            request_fill();
            break;

        case EvKind::FillPass:
            fill_pass_scheduled_ = false;
            fill_pass();
            break;

        case EvKind::AmbientPing: {
            if (!knowers_.empty()) {
                size_t pick = knowers_[rng_ambient_.bounded(knowers_.size())];
                auto outcome = victim_table_->add_seen(honest_[pick].rec);
                emit({.kind = TraceKind::TableAdd, .peer = honest_[pick].rec.id,
                      .add_outcome = outcome});
            }
            schedule_ambient_ping();
            break;
        }

        case EvKind::RefreshTick: {
            refresh_targets_ = {victim_rec_.id, random_target(rng_target_),
                                random_target(rng_target_), random_target(rng_target_)};
            pump_refresh();
            schedule(now_ + static_cast<SimTime>(cfg_.refresh_interval_s * 1e9),
                     {.kind = EvKind::RefreshTick});
            break;
        }
    }
}

void Simulation::run_until(SimTime t) {
    while (!queue_.empty() && !eclipsed_) {
        const Event& top = queue_.top();
        if (top.at > t) break;
        Event ev = top;
        queue_.pop();
        now_ = ev.at;
        handle(ev);
    }
    now_ = std::max(now_, t);
}

SimTrace Simulation::run() {
    SimTime end = cfg_.end_ns();
    while (!queue_.empty() && !eclipsed_) {
        const Event& top = queue_.top();
        if (top.at > end) break;
        Event ev = top;
        queue_.pop();
        now_ = ev.at;
        handle(ev);
    }
    return take_trace();
}

SimTrace Simulation::take_trace() {
    SimTrace out = std::move(trace_);
    trace_ = SimTrace{};
    return out;
}

SimTrace run_scenario(const ScenarioConfig& cfg) { return Simulation(cfg).run(); }

namespace {

void append_common(std::string& out, SimTime t) {
    out += "{\"time\":";
    out += std::to_string(t);
    out += ",\"node\":\"victim\"";
}

}  // namespace

std::string SimTrace::to_ndjson() const {
    std::string out;
    out.reserve(events.size() * 120 + 128);
    for (const auto& e : events) {
        append_common(out, e.time);
        switch (e.kind) {
            case TraceKind::AttackStart:
                out += ",\"event\":\"attack_start\"";
                break;
            case TraceKind::Connect:
            case TraceKind::Disconnect:
                out += e.kind == TraceKind::Connect ? ",\"event\":\"connect\""
                                                    : ",\"event\":\"disconnect\"";
                out += ",\"peer\":\"" + e.peer.to_hex() + "\"";
                out += ",\"direction\":\"";
                out += direction_str(e.direction);
                out += "\",\"provenance\":\"";
                out += provenance_str(e.provenance);
                out += "\"";
                break;
            case TraceKind::LookupStart:
                out += ",\"event\":\"lookup_start\",\"target\":\"" + e.target.to_hex() + "\"";
                break;
            case TraceKind::LookupDone:
                out += ",\"event\":\"lookup_done\",\"target\":\"" + e.target.to_hex() + "\"";
                out += ",\"rounds\":" + std::to_string(e.rounds);
                out += ",\"result_size\":" + std::to_string(e.result_size);
                out += ",\"adversarial\":" + std::to_string(e.adversarial);
                break;
            case TraceKind::Eclipse:
                out += ",\"event\":\"eclipse\"";
                break;
            case TraceKind::SybilPing:
                out += ",\"event\":\"sybil_ping\",\"peer\":\"" + e.peer.to_hex() + "\"";
                out += ",\"outcome\":\"";
                out += add_outcome_str(e.add_outcome);
                out += "\"";
                break;
            case TraceKind::Revalidate:
                out += ",\"event\":\"revalidate\",\"peer\":\"" + e.peer.to_hex() + "\"";
                out += e.alive ? ",\"alive\":true" : ",\"alive\":false";
                break;
            case TraceKind::TableAdd:
                out += ",\"event\":\"table_add\",\"peer\":\"" + e.peer.to_hex() + "\"";
                out += ",\"outcome\":\"";
                out += add_outcome_str(e.add_outcome);
                out += "\"";
                break;
        }
        out += "}\n";
    }
    out += "{\"outcome\":\"";
    out += outcome.eclipsed ? "ECLIPSED" : "TIMEOUT";
    out += "\",\"eclipse_time_ns\":";
    out += outcome.eclipsed ? std::to_string(outcome.eclipse_time_ns) : "null";
    out += ",\"seed\":" + std::to_string(outcome.seed) + "}\n";
    return out;
}

void SimTrace::write_ndjson(std::ostream& os) const { os << to_ndjson(); }

}  // namespace eclipsim
