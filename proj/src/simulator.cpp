// SPDX-License-Identifier: Apache-2.0

#include "rrsel/simulator.hpp"

#include "rrsel/channel.hpp"
#include "rrsel/gpsr.hpp"
#include "rrsel/linkcalc.hpp"
#include "rrsel/mobility.hpp"
#include "rrsel/predictor.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>

namespace rrsel::sim {

void EventQueue::schedule(double t, Handler fn)
{
    if (!(t >= now_))
        throw std::logic_error(fmt::format("EventQueue: event at {} scheduled in the past (now {})", t, now_));
    heap_.push_back({t, seq_++, std::move(fn)});
    std::push_heap(heap_.begin(), heap_.end(), later);
}

bool EventQueue::step()
{
    if (heap_.empty())
        return false;
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    now_ = e.time;
    ++dispatched_;
    e.fn();
    return true;
}

void EventQueue::run_until(double end)
{
    while (!heap_.empty() && heap_.front().time <= end)
        step();
}

double interference_at(std::span<const Emission> active, mac::NodeId node, mac::NodeId intended, double t)
{
    double sum = 0.0;
    for (const auto& e : active) {
        if (e.sender == node || e.sender == intended || !(e.start <= t && t < e.end))
            continue;
        sum += e.rxPowerW.at(static_cast<std::size_t>(node));
    }
    return sum;
}

bool reception_decision(phy::Rate rate, double sinr, int bits, Rng& rng)
{
    const double ps = phy::packet_success_prob(rate, sinr, bits);
    if (ps <= 0.0)
        return false;
    if (ps >= 1.0)
        return true;
    return uniform01(rng) < ps;
}

namespace {

using mac::NodeId;
using mac::Position;
using phy::FrameKind;

constexpr double kSameInstant = 1e-12;

struct Packet {
    std::int64_t id = 0;
    int flow = 0;
    NodeId dst = -1;
    double created = 0.0;
    int hops = 0;
};

struct PacketFate {
    int liveCopies = 0;
    bool delivered = false;
    DropCause lastCause = DropCause::Duplicate;
};

struct Frame {
    FrameKind kind = FrameKind::Hello;
    phy::Rate rate = phy::Rate::R1;
    int bits = 0;
    double airtime = 0.0;
    NodeId src = -1;
    NodeId dst = -1; // -1: broadcast or candidate list
    std::uint64_t exchange = 0;
    double navUntil = 0.0;
    Position pos;                   // HELLO and CTS
    std::vector<NodeId> candidates; // MRTS
    int slot = 0;                   // CTS, 1-based
    double reportedSinr = 0.0;      // CTS
    Packet packet;                  // DATA
};

struct Tx {
    std::uint64_t id = 0;
    Frame frame;
    Emission emission;
    std::function<void()> onEnd;
};

struct Response {
    NodeId id = -1;
    int slot = 0;
    double ctsEnd = 0.0;
    double reportedSinr = 0.0;
    Position pos;
};

struct Exchange {
    std::uint64_t id = 0;
    int K = 0;
    bool awaitingCts = false;
    bool awaitingAck = false;
    std::vector<Response> responses;
};

enum class Mode { Idle, Contending, Busy };

struct Node {
    mobility::RwpState mob;
    Rng mobRng;
    Rng macRng;
    gpsr::NeighborTable table;
    std::deque<Packet> queue;
    bool helloPending = false;

    Mode mode = Mode::Idle;
    mac::Backoff backoff;
    int slots = -1;
    bool counting = false;
    double idleSince = 0.0;
    double fireAt = 0.0;
    std::uint64_t timerGen = 0;
    double contentionStart = 0.0;
    double lastContention = 0.0;
    int retries = 0;
    double nav = 0.0;

    bool transmitting = false;
    std::optional<std::uint64_t> lockTx;
    double lockSignal = 0.0;
    double lockImax = 0.0;

    Exchange ex;
    std::set<std::int64_t> seen;
};

struct Flow {
    NodeId src = -1;
    NodeId dst = -1;
    double start = 0.0;
    std::int64_t delivered = 0;
};

class Network {
public:
    Network(const ScenarioConfig& cfg, const SimulatorOptions& opt);
    RunMetrics run();

private:
    // Geometry and channel.
    Position pos(NodeId n) const { return mobility::position_at(node(n).mob, q_.now()); }
    double mean_snr(NodeId a, NodeId b) const;
    channel::FadingProcess& fading(NodeId a, NodeId b);
    void retune_links(NodeId n);
    void on_waypoint(NodeId n);

    // Medium.
    double sensed_power(NodeId n, bool onlyEarlier) const;
    bool medium_busy(NodeId n) const;
    bool transmit(NodeId n, Frame f, std::function<void()> onEnd = {});
    void end_tx(std::uint64_t id);
    void on_receive(NodeId n, const Tx& tx, double sinr);
    void set_nav(NodeId n, double until);

    // MAC.
    void kick(NodeId n);
    void refresh(NodeId n);
    void refresh_all();
    void on_access(NodeId n, std::uint64_t gen);
    void start_data_attempt(NodeId n);
    void decide(NodeId n, std::uint64_t exId);
    void send_data(NodeId n, NodeId relay, phy::Rate rate);
    void attempt_succeeded(NodeId n);
    void attempt_failed(NodeId n);
    void finish(NodeId n);
    void send_cts(NodeId n, NodeId to, std::uint64_t exId, int slot, int K, double reported);
    void send_ack(NodeId n, NodeId to, std::uint64_t exId);

    // Traffic.
    void generate(int flow);
    void hello_timer(NodeId n);
    void accept(NodeId n, Packet p);
    void drop_copy(const Packet& p, DropCause c);

    Node& node(NodeId n) { return nodes_[static_cast<std::size_t>(n)]; }
    const Node& node(NodeId n) const { return nodes_[static_cast<std::size_t>(n)]; }
    const mac::MacTiming& timing(int K) const { return timing_.at(static_cast<std::size_t>(K)); }
    void trace(const Tx& tx);

    ScenarioConfig cfg_;
    SimulatorOptions opt_;
    channel::PathLossParams pl_;
    mobility::RwpParams rwp_;
    linkcalc::LinkParams link_;
    phy::FrameSpec dataFrame_;
    std::vector<mac::MacTiming> timing_;
    double sensitivityW_;
    double ackAirtime_;

    EventQueue q_;
    std::vector<Node> nodes_;
    std::vector<std::unique_ptr<channel::FadingProcess>> links_;
    std::vector<Flow> flows_;
    std::vector<PacketFate> fates_;
    std::map<std::uint64_t, Tx> active_;
    std::uint64_t nextTx_ = 1;
    std::uint64_t nextExchange_ = 1;

    Rng trafficRng_;
    Rng receptionRng_;
    Rng pilotRng_;
    Rng helloRng_;
    predictor::CoefficientCache coeffs_;

    RunMetrics m_;
    double delaySum_ = 0.0;
    double hopSum_ = 0.0;
};

Network::Network(const ScenarioConfig& cfg, const SimulatorOptions& opt)
    : cfg_(cfg), opt_(opt), trafficRng_(make_stream(cfg.seed, "traffic")),
      receptionRng_(make_stream(cfg.seed, "reception")), pilotRng_(make_stream(cfg.seed, "pilots")),
      helloRng_(make_stream(cfg.seed, "hello"))
{
    cfg_.validate();
    if (!opt_.fixedPositions.empty() && static_cast<int>(opt_.fixedPositions.size()) != cfg_.nodeCount)
        throw ConfigError("fixedPositions must hold one entry per node");

    pl_.txPowerW = cfg_.txPowerW;
    pl_.noiseW = channel::dbm_to_watt(cfg_.noiseDbm);
    pl_.validate();
    sensitivityW_ = channel::dbm_to_watt(cfg_.sensitivityDbm);

    rwp_.vMax = cfg_.vMax;
    rwp_.pauseS = cfg_.pauseS;
    rwp_.arenaWidth = rwp_.arenaHeight = cfg_.arenaM;

    dataFrame_ = phy::data_frame(cfg_.packetBytes);
    link_ = linkcalc::LinkParams::from_frame(dataFrame_);
    timing_.resize(static_cast<std::size_t>(cfg_.L) + 1);
    for (int K = 1; K <= cfg_.L; ++K)
        timing_[static_cast<std::size_t>(K)] = mac::MacTiming::standard(K);
    ackAirtime_ = phy::airtime(phy::ack_frame(), phy::Rate::R1);

    gpsr::GpsrParams gp;
    gp.helloIntervalS = cfg_.helloIntervalS;
    const auto N = static_cast<std::size_t>(cfg_.nodeCount);
    nodes_.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        Node nd;
        nd.mobRng = make_stream(cfg_.seed, "mobility", i);
        nd.macRng = make_stream(cfg_.seed, "mac", i);
        nd.table = gpsr::NeighborTable(gp);
        nd.mob = opt_.fixedPositions.empty() ? mobility::initial_state(nd.mobRng, rwp_, 0.0)
                                             : mobility::static_state(opt_.fixedPositions[i]);
        nodes_.push_back(std::move(nd));
    }

    links_.resize(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = a + 1; b < N; ++b)
            links_[a * N + b] = std::make_unique<channel::FadingProcess>(
                0.0, derive_seed(cfg_.seed, "fading", a * N + b));
    for (std::size_t a = 0; a < N; ++a)
        retune_links(static_cast<NodeId>(a));

    // Sources and destinations are disjoint: the first 2F entries of a
    // shuffled node list, paired in order.
    std::vector<NodeId> order(N);
    for (std::size_t i = 0; i < N; ++i)
        order[i] = static_cast<NodeId>(i);
    for (std::size_t i = N - 1; i > 0; --i)
        std::swap(order[i], order[static_cast<std::size_t>(trafficRng_() % (i + 1))]);
    for (int f = 0; f < cfg_.flowCount; ++f) {
        Flow fl;
        fl.src = order[static_cast<std::size_t>(2 * f)];
        fl.dst = order[static_cast<std::size_t>(2 * f + 1)];
        fl.start = cfg_.warmupStartMinS + (cfg_.warmupStartMaxS - cfg_.warmupStartMinS) * uniform01(trafficRng_);
        flows_.push_back(fl);
    }
}

double Network::mean_snr(NodeId a, NodeId b) const
{
    const double d = std::max(mac::distance(pos(a), pos(b)), 1e-3);
    return pl_.txPowerW * channel::path_gain(d, pl_) / pl_.noiseW;
}

channel::FadingProcess& Network::fading(NodeId a, NodeId b)
{
    if (a > b)
        std::swap(a, b);
    return *links_[static_cast<std::size_t>(a) * nodes_.size() + static_cast<std::size_t>(b)];
}

void Network::retune_links(NodeId n)
{
    const double now = q_.now();
    const auto vn = mobility::velocity(node(n).mob);
    for (NodeId o = 0; o < cfg_.nodeCount; ++o) {
        if (o == n)
            continue;
        double fd = cfg_.dopplerOverrideHz;
        if (fd < 0.0)
            fd = channel::doppler_from_speed(mobility::relative_speed(vn, mobility::velocity(node(o).mob)),
                                             pl_.carrierHz);
        auto& proc = fading(n, o);
        if (proc.doppler_hz() != fd)
            proc.retune(fd, now);
    }
}

void Network::on_waypoint(NodeId n)
{
    auto& nd = node(n);
    nd.mob = mobility::advance(nd.mob, nd.mobRng, rwp_);
    retune_links(n);
    if (std::isfinite(nd.mob.phaseEnd))
        q_.schedule(nd.mob.phaseEnd, [this, n] { on_waypoint(n); });
}

double Network::sensed_power(NodeId n, bool onlyEarlier) const
{
    double p = 0.0;
    for (const auto& [id, tx] : active_) {
        if (tx.emission.sender == n || (onlyEarlier && tx.emission.start >= q_.now() - kSameInstant))
            continue;
        p += tx.emission.rxPowerW[static_cast<std::size_t>(n)];
    }
    return p;
}

bool Network::medium_busy(NodeId n) const
{
    const auto& nd = node(n);
    return nd.transmitting || nd.nav > q_.now() + kSameInstant || sensed_power(n, false) >= sensitivityW_;
}

void Network::trace(const Tx& tx)
{
    if (!cfg_.trace || !opt_.trace)
        return;
    const auto& f = tx.frame;
    fmt::print(*opt_.trace, "{:.9f},{},{},{},{},{:.9f}\n", tx.emission.start, phy::frame_kind_name(f.kind), f.src,
               f.dst, phy::rate_name(f.rate), tx.emission.end);
}

bool Network::transmit(NodeId n, Frame f, std::function<void()> onEnd)
{
    auto& nd = node(n);
    if (nd.transmitting)
        return false;
    nd.lockTx.reset(); // half duplex

    const double now = q_.now();
    Tx tx;
    tx.id = nextTx_++;
    f.src = n;
    tx.frame = std::move(f);
    tx.emission.sender = n;
    tx.emission.start = now;
    tx.emission.end = now + tx.frame.airtime;
    tx.emission.rxPowerW.assign(nodes_.size(), 0.0);
    const Position pn = pos(n);
    for (NodeId j = 0; j < cfg_.nodeCount; ++j) {
        if (j == n)
            continue;
        const double d = std::max(mac::distance(pn, pos(j)), 1e-3);
        tx.emission.rxPowerW[static_cast<std::size_t>(j)] =
            pl_.txPowerW * channel::path_gain(d, pl_) * std::norm(fading(n, j).sample(now));
    }
    tx.onEnd = std::move(onEnd);
    nd.transmitting = true;
    trace(tx);

    const auto id = tx.id;
    const double end = tx.emission.end;
    auto& stored = active_.emplace(id, std::move(tx)).first->second;

    for (NodeId j = 0; j < cfg_.nodeCount; ++j) {
        if (j == n)
            continue;
        auto& rj = node(j);
        if (rj.transmitting)
            continue;
        if (rj.lockTx) {
            const double i = sensed_power(j, false) - active_.at(*rj.lockTx).emission.rxPowerW[static_cast<std::size_t>(j)];
            rj.lockImax = std::max(rj.lockImax, i);
        } else if (stored.emission.rxPowerW[static_cast<std::size_t>(j)] >= sensitivityW_) {
            rj.lockTx = id;
            rj.lockSignal = stored.emission.rxPowerW[static_cast<std::size_t>(j)];
            rj.lockImax = sensed_power(j, false) - rj.lockSignal;
        }
    }
    q_.schedule(end, [this, id] { end_tx(id); });
    refresh_all();
    return true;
}

void Network::end_tx(std::uint64_t id)
{
    auto it = active_.find(id);
    Tx tx = std::move(it->second);
    active_.erase(it);
    node(tx.emission.sender).transmitting = false;

    const auto& f = tx.frame;
    for (NodeId j = 0; j < cfg_.nodeCount; ++j) {
        auto& rj = node(j);
        if (!rj.lockTx || *rj.lockTx != id)
            continue;
        rj.lockTx.reset();
        const double sinr = rj.lockSignal / (pl_.noiseW + std::max(rj.lockImax, 0.0));
        if (reception_decision(f.rate, sinr, f.bits, receptionRng_))
            on_receive(j, tx, sinr);
    }
    if (tx.onEnd)
        tx.onEnd();
    refresh_all();
}

void Network::set_nav(NodeId n, double until)
{
    auto& nd = node(n);
    if (until <= nd.nav)
        return;
    nd.nav = until;
    q_.schedule(until, [this, n] { refresh(n); });
    refresh(n);
}

void Network::on_receive(NodeId n, const Tx& tx, double sinr)
{
    const auto& f = tx.frame;
    const double now = q_.now();
    auto& nd = node(n);
    switch (f.kind) {
    case FrameKind::Hello:
        nd.table.process_hello({f.src, f.pos}, mean_snr(n, f.src), now);
        break;
    case FrameKind::Mrts: {
        const auto it = std::find(f.candidates.begin(), f.candidates.end(), n);
        const bool eligible = it != f.candidates.end() && nd.nav <= now + kSameInstant && nd.mode != Mode::Busy;
        set_nav(n, f.navUntil);
        if (eligible) {
            const int slot = static_cast<int>(it - f.candidates.begin()) + 1;
            const int K = static_cast<int>(f.candidates.size());
            const auto& t = timing(K);
            const double at = now + (slot - 1) * (t.sifs + t.ctsAirtime) + t.sifs;
            const NodeId to = f.src;
            const auto ex = f.exchange;
            q_.schedule(at, [this, n, to, ex, slot, K, sinr] { send_cts(n, to, ex, slot, K, sinr); });
        }
        break;
    }
    case FrameKind::Cts: {
        auto& ex = nd.ex;
        if (f.dst == n && ex.awaitingCts && ex.id == f.exchange)
            ex.responses.push_back({f.src, f.slot, now, f.reportedSinr, f.pos});
        else if (f.dst != n)
            set_nav(n, f.navUntil);
        break;
    }
    case FrameKind::Data:
        if (f.dst == n) {
            const NodeId to = f.src;
            const auto ex = f.exchange;
            q_.schedule(now + phy::kSifs, [this, n, to, ex] { send_ack(n, to, ex); });
            accept(n, f.packet);
        } else {
            set_nav(n, f.navUntil);
        }
        break;
    case FrameKind::Ack:
        if (f.dst == n && nd.ex.awaitingAck && nd.ex.id == f.exchange) {
            nd.ex.awaitingAck = false;
            attempt_succeeded(n);
        }
        break;
    }
}

void Network::kick(NodeId n)
{
    auto& nd = node(n);
    if (nd.mode != Mode::Idle || (!nd.helloPending && nd.queue.empty()))
        return;
    nd.mode = Mode::Contending;
    if (nd.slots < 0)
        nd.slots = nd.backoff.draw(nd.macRng);
    nd.contentionStart = q_.now();
    nd.counting = false;
    refresh(n);
}

void Network::refresh(NodeId n)
{
    auto& nd = node(n);
    if (nd.mode != Mode::Contending)
        return;
    const double now = q_.now();
    const bool busy = medium_busy(n);
    if (busy && nd.counting) {
        // A timer expiring at this very instant still fires: both stations
        // picked the same slot boundary.
        if (nd.fireAt - now <= kSameInstant)
            return;
        const double elapsed = now - nd.idleSince - phy::kDifs;
        if (elapsed > 0.0) {
            const int done = static_cast<int>(std::floor(elapsed / phy::kSlot + 1e-9));
            nd.slots = std::max(0, nd.slots - done);
        }
        nd.counting = false;
        ++nd.timerGen;
    } else if (!busy && !nd.counting) {
        nd.counting = true;
        nd.idleSince = now;
        nd.fireAt = now + phy::kDifs + nd.slots * phy::kSlot;
        const auto gen = ++nd.timerGen;
        q_.schedule(nd.fireAt, [this, n, gen] { on_access(n, gen); });
    }
}

void Network::refresh_all()
{
    for (NodeId n = 0; n < cfg_.nodeCount; ++n)
        refresh(n);
}

void Network::on_access(NodeId n, std::uint64_t gen)
{
    auto& nd = node(n);
    if (nd.mode != Mode::Contending || !nd.counting || gen != nd.timerGen)
        return;
    if (nd.transmitting || nd.nav > q_.now() + kSameInstant || sensed_power(n, true) >= sensitivityW_)
        ++m_.carrierSenseViolations;
    nd.counting = false;
    nd.slots = -1;
    nd.mode = Mode::Busy;

    if (nd.helloPending) {
        nd.helloPending = false;
        Frame f;
        f.kind = FrameKind::Hello;
        f.bits = phy::hello_frame().mpdu_bits();
        f.airtime = phy::airtime(phy::hello_frame(), phy::Rate::R1);
        f.pos = pos(n);
        if (!transmit(n, std::move(f), [this, n] { finish(n); }))
            finish(n);
        return;
    }
    nd.lastContention = q_.now() - nd.contentionStart;
    m_.contentionTimeS += nd.lastContention;
    start_data_attempt(n);
}

void Network::start_data_attempt(NodeId n)
{
    auto& nd = node(n);
    const Packet& p = nd.queue.front();
    const double now = q_.now();
    auto cands = gpsr::candidate_list(nd.table, pos(n), pos(p.dst), cfg_.L, now, link_);
    ++m_.forwardingDecisions;
    if (cands.empty()) {
        drop_copy(p, DropCause::NoProgress);
        nd.queue.pop_front();
        nd.retries = 0;
        finish(n);
        return;
    }
    ++m_.dataAttempts;
    nd.ex = Exchange{};
    nd.ex.id = nextExchange_++;

    if (cfg_.csiScheme == mac::CsiScheme::Ideal) {
        const Position self = pos(n);
        const Position dest = pos(p.dst);
        for (auto& c : cands) {
            c.position = pos(c.nodeId);
            c.progress = gpsr::progress(self, c.position, dest);
            c.snrEstimate = mean_snr(n, c.nodeId) * std::norm(fading(n, c.nodeId).sample(now));
            c.csiAgeSeconds = 0.0;
        }
        std::erase_if(cands, [](const mac::RelayCandidate& c) { return !(c.progress > 0.0); });
        if (cands.empty()) {
            attempt_failed(n);
            return;
        }
        const auto sel = mac::select_rate_relay(cands, link_);
        send_data(n, sel.nodeId, sel.rate);
        return;
    }

    const int K = static_cast<int>(cands.size());
    const auto& t = timing(K);
    Frame f;
    f.kind = FrameKind::Mrts;
    f.bits = phy::mrts_frame(K).mpdu_bits();
    f.airtime = t.mrtsAirtime;
    f.exchange = nd.ex.id;
    for (const auto& c : cands)
        f.candidates.push_back(c.nodeId);
    f.navUntil = now + t.mrtsAirtime + mac::mrts_nav(K, dataFrame_, t);
    nd.ex.K = K;
    nd.ex.awaitingCts = true;
    if (!transmit(n, std::move(f))) {
        attempt_failed(n);
        return;
    }
    const double dataStart = now + t.mrtsAirtime + K * (t.sifs + t.ctsAirtime) + t.sifs;
    const auto exId = nd.ex.id;
    q_.schedule(dataStart, [this, n, exId] { decide(n, exId); });
}

void Network::send_cts(NodeId n, NodeId to, std::uint64_t exId, int slot, int K, double reported)
{
    const auto& t = timing(K);
    Frame f;
    f.kind = FrameKind::Cts;
    f.bits = phy::cts_frame().mpdu_bits();
    f.airtime = t.ctsAirtime;
    f.dst = to;
    f.exchange = exId;
    f.slot = slot;
    f.reportedSinr = reported;
    f.pos = pos(n);
    f.navUntil = q_.now() + t.ctsAirtime + mac::cts_delay(K, slot, t) + phy::airtime(dataFrame_, phy::Rate::R1) +
                 t.sifs + ackAirtime_;
    transmit(n, std::move(f));
}

void Network::send_ack(NodeId n, NodeId to, std::uint64_t exId)
{
    Frame f;
    f.kind = FrameKind::Ack;
    f.bits = phy::ack_frame().mpdu_bits();
    f.airtime = ackAirtime_;
    f.dst = to;
    f.exchange = exId;
    transmit(n, std::move(f));
}

void Network::decide(NodeId n, std::uint64_t exId)
{
    auto& nd = node(n);
    if (nd.ex.id != exId || !nd.ex.awaitingCts)
        return;
    nd.ex.awaitingCts = false;
    if (nd.ex.responses.empty()) {
        ++m_.exchangeFailures;
        attempt_failed(n);
        return;
    }
    const double now = q_.now();
    const Position self = pos(n);
    const Position dest = pos(nd.queue.front().dst);
    std::vector<mac::RelayCandidate> cands;
    for (const auto& r : nd.ex.responses) {
        mac::RelayCandidate c;
        c.nodeId = r.id;
        c.position = r.pos;
        c.progress = gpsr::progress(self, r.pos, dest);
        c.csiAgeSeconds = now - r.ctsEnd;
        if (cfg_.csiScheme == mac::CsiScheme::RtsCsi) {
            c.snrEstimate = r.reportedSinr;
        } else {
            const auto& proc = fading(n, r.id);
            predictor::PredictorConfig pc;
            pc.pilotSnrDb = cfg_.pilotSnrDb;
            pc.order = cfg_.predictorOrder;
            pc.horizonSeconds = c.csiAgeSeconds;
            const auto& w = coeffs_.get(proc.doppler_hz(), pc);
            const auto block = predictor::observe_pilots(proc, r.ctsEnd, predictor::kCtsPilots, pc, pilotRng_);
            const double d = std::max(mac::distance(self, r.pos), 1e-3);
            const double avg = pl_.txPowerW * channel::path_gain(d, pl_) / pl_.noiseW;
            c.snrEstimate = predictor::predict_gain(block, w, avg).snrEstimate;
        }
        if (c.progress > 0.0)
            cands.push_back(c);
    }
    if (cands.empty()) {
        attempt_failed(n);
        return;
    }
    const auto sel = mac::select_rate_relay(cands, link_);
    send_data(n, sel.nodeId, sel.rate);
}

void Network::send_data(NodeId n, NodeId relay, phy::Rate rate)
{
    auto& nd = node(n);
    Frame f;
    f.kind = FrameKind::Data;
    f.rate = rate;
    f.bits = dataFrame_.mpdu_bits();
    f.airtime = phy::airtime(dataFrame_, rate);
    f.dst = relay;
    f.exchange = nd.ex.id;
    f.packet = nd.queue.front();
    const double now = q_.now();
    f.navUntil = now + f.airtime + phy::kSifs + ackAirtime_;
    const double ackDeadline = now + f.airtime + phy::kSifs + ackAirtime_ + phy::kSlot;
    if (!transmit(n, std::move(f))) {
        attempt_failed(n);
        return;
    }
    nd.ex.awaitingAck = true;
    const auto exId = nd.ex.id;
    q_.schedule(ackDeadline, [this, n, exId] {
        auto& s = node(n);
        if (s.ex.id == exId && s.ex.awaitingAck) {
            s.ex.awaitingAck = false;
            attempt_failed(n);
        }
    });
}

void Network::attempt_succeeded(NodeId n)
{
    auto& nd = node(n);
    ++m_.dataSuccesses;
    m_.successContentionTimeS += nd.lastContention;
    const Packet p = nd.queue.front();
    nd.queue.pop_front();
    auto& fate = fates_[static_cast<std::size_t>(p.id)];
    if (--fate.liveCopies == 0 && !fate.delivered)
        ++m_.drops[static_cast<std::size_t>(fate.lastCause)];
    nd.retries = 0;
    nd.backoff.on_success();
    finish(n);
}

void Network::attempt_failed(NodeId n)
{
    auto& nd = node(n);
    if (++nd.retries > cfg_.retryLimit) {
        drop_copy(nd.queue.front(), DropCause::RetryLimit);
        nd.queue.pop_front();
        nd.retries = 0;
        nd.backoff.on_success();
    } else {
        nd.backoff.on_failure();
    }
    finish(n);
}

void Network::finish(NodeId n)
{
    auto& nd = node(n);
    nd.mode = Mode::Idle;
    nd.ex.awaitingCts = nd.ex.awaitingAck = false;
    kick(n);
}

void Network::drop_copy(const Packet& p, DropCause c)
{
    auto& fate = fates_[static_cast<std::size_t>(p.id)];
    fate.lastCause = c;
    if (--fate.liveCopies == 0 && !fate.delivered)
        ++m_.drops[static_cast<std::size_t>(c)];
}

void Network::accept(NodeId n, Packet p)
{
    auto& fate = fates_[static_cast<std::size_t>(p.id)];
    ++p.hops;
    if (n == p.dst) {
        if (!fate.delivered) {
            fate.delivered = true;
            ++m_.delivered;
            ++flows_[static_cast<std::size_t>(p.flow)].delivered;
            delaySum_ += q_.now() - p.created;
            hopSum_ += p.hops;
        }
        return;
    }
    auto& nd = node(n);
    if (!nd.seen.insert(p.id).second) {
        fate.lastCause = DropCause::Duplicate;
        return;
    }
    ++fate.liveCopies;
    if (static_cast<int>(nd.queue.size()) >= cfg_.queueLimit) {
        drop_copy(p, DropCause::QueueOverflow);
        return;
    }
    nd.queue.push_back(p);
    kick(n);
}

void Network::generate(int flow)
{
    const auto& fl = flows_[static_cast<std::size_t>(flow)];
    const double now = q_.now();
    Packet p;
    p.id = static_cast<std::int64_t>(fates_.size());
    p.flow = flow;
    p.dst = fl.dst;
    p.created = now;
    fates_.push_back({1, false, DropCause::Duplicate});
    ++m_.sent;
    auto& src = node(fl.src);
    src.seen.insert(p.id);
    if (static_cast<int>(src.queue.size()) >= cfg_.queueLimit) {
        drop_copy(p, DropCause::QueueOverflow);
    } else {
        src.queue.push_back(p);
        kick(fl.src);
    }
    const double next = now + cfg_.packetIntervalS;
    if (next < cfg_.simEndS)
        q_.schedule(next, [this, flow] { generate(flow); });
}

void Network::hello_timer(NodeId n)
{
    auto& nd = node(n);
    nd.helloPending = true;
    kick(n);
    const double jitter = 0.02 * cfg_.helloIntervalS * (uniform01(helloRng_) - 0.5);
    q_.schedule(q_.now() + cfg_.helloIntervalS + jitter, [this, n] { hello_timer(n); });
}

RunMetrics Network::run()
{
    for (NodeId n = 0; n < cfg_.nodeCount; ++n) {
        if (std::isfinite(node(n).mob.phaseEnd))
            q_.schedule(node(n).mob.phaseEnd, [this, n] { on_waypoint(n); });
        q_.schedule(cfg_.helloIntervalS * uniform01(helloRng_), [this, n] { hello_timer(n); });
    }
    for (int f = 0; f < static_cast<int>(flows_.size()); ++f)
        q_.schedule(flows_[static_cast<std::size_t>(f)].start, [this, f] { generate(f); });

    q_.run_until(cfg_.simEndS + cfg_.drainS);

    for (auto& nd : nodes_) {
        for (const auto& p : nd.queue)
            drop_copy(p, DropCause::EndOfRun);
        nd.queue.clear();
    }

    m_.seed = cfg_.seed;
    m_.vMax = cfg_.vMax;
    m_.L = cfg_.L;
    m_.scheme = cfg_.csiScheme;
    m_.packetDeliveryRatio = m_.sent > 0 ? static_cast<double>(m_.delivered) / static_cast<double>(m_.sent) : 1.0;
    m_.meanEndToEndDelayS = m_.delivered > 0 ? delaySum_ / static_cast<double>(m_.delivered) : 0.0;
    m_.meanHopCount = m_.delivered > 0 ? hopSum_ / static_cast<double>(m_.delivered) : 0.0;
    for (const auto& fl : flows_) {
        const double pps = static_cast<double>(fl.delivered) / (cfg_.simEndS - fl.start);
        m_.flowThroughputPps.push_back(pps);
        m_.endToEndThroughputPps += pps;
    }
    return m_;
}

} // namespace

RunMetrics run(const ScenarioConfig& cfg, const SimulatorOptions& opt)
{
    Network net(cfg, opt);
    return net.run();
}

} // namespace rrsel::sim
