#pragma once
// Local communication: broadcast/unicast messages with exactly five
// payload kinds. Delivery is handled by the engine with one tick of
// latency, gated by comm_range at the delivery tick.

#include <variant>

namespace swarmpath {

inline constexpr int kAllRobots = -1;

struct RecruitRequest {
    int needed = 0;
};
struct Volunteer {
    int id = -1;
};
struct Ack {
    int id = -1;
};
struct RestOrder {};
struct GoalFoundInfo {
    long explore_time = 0;
};

using MessagePayload = std::variant<RecruitRequest, Volunteer, Ack, RestOrder, GoalFoundInfo>;

struct Message {
    int sender = -1;
    int receiver = kAllRobots;  // kAllRobots marks a broadcast
    MessagePayload payload;

    bool is_broadcast() const { return receiver == kAllRobots; }
};

inline Message broadcast(int sender, MessagePayload payload) {
    return {sender, kAllRobots, std::move(payload)};
}

inline Message unicast(int sender, int receiver, MessagePayload payload) {
    return {sender, receiver, std::move(payload)};
}

inline const char* payload_name(const MessagePayload& p) {
    struct Visitor {
        const char* operator()(const RecruitRequest&) const { return "recruit_request"; }
        const char* operator()(const Volunteer&) const { return "volunteer"; }
        const char* operator()(const Ack&) const { return "ack"; }
        const char* operator()(const RestOrder&) const { return "rest_order"; }
        const char* operator()(const GoalFoundInfo&) const { return "goal_found_info"; }
    };
    return std::visit(Visitor{}, p);
}

}  // namespace swarmpath
