#include "boa/gridworld.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "boa/io.hpp"

namespace boa {

namespace {

constexpr std::uint8_t kWall = static_cast<std::uint8_t>(Cell::wall);
constexpr std::uint8_t kFloor = static_cast<std::uint8_t>(Cell::floor);

// Row/col deltas, indexed by Heading.
constexpr std::array<int, 4> kForwardRow = {-1, 0, 1, 0};
constexpr std::array<int, 4> kForwardCol = {0, 1, 0, -1};
constexpr std::array<int, 4> kRightRow = {0, 1, 0, -1};
constexpr std::array<int, 4> kRightCol = {1, 0, -1, 0};

Heading turn_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
Heading turn_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }

bool adjacent4(const GridPos& a, const GridPos& b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
}

}  // namespace

Task task_from_name(const std::string& name) {
    if (name == "hallway") return Task::hallway;
    if (name == "one_room") return Task::one_room;
    if (name == "four_rooms") return Task::four_rooms;
    if (name == "t_maze") return Task::t_maze;
    if (name == "maze_s3") return Task::maze_s3;
    if (name == "pick_place") return Task::pick_place;
    throw SpecError("unknown task: " + name);
}

std::string task_name(Task task) {
    switch (task) {
        case Task::hallway: return "hallway";
        case Task::one_room: return "one_room";
        case Task::four_rooms: return "four_rooms";
        case Task::t_maze: return "t_maze";
        case Task::maze_s3: return "maze_s3";
        case Task::pick_place: return "pick_place";
    }
    throw SpecError("invalid task enum");
}

EnvSpec EnvSpec::defaults(Task task, std::uint64_t seed) {
    EnvSpec s;
    s.task = task;
    s.seed = seed;
    s.view_radius = 3;
    s.max_steps = task == Task::pick_place ? 200 : 100;
    switch (task) {
        case Task::hallway:
            s.width = 17;  // 15-cell corridor
            s.height = 3;
            break;
        case Task::one_room:
            s.width = 8;
            s.height = 8;
            break;
        case Task::four_rooms:
            s.width = 13;
            s.height = 13;
            break;
        case Task::t_maze:
            s.width = 13;
            s.height = 9;
            break;
        case Task::maze_s3:
            s.width = 15;
            s.height = 15;
            break;
        case Task::pick_place:
            s.width = 9;
            s.height = 9;
            break;
    }
    return s;
}

std::uint64_t EnvSpec::fingerprint() const {
    std::vector<std::uint8_t> buf;
    auto push_u32 = [&buf](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    buf.push_back(static_cast<std::uint8_t>(task));
    push_u32(static_cast<std::uint32_t>(width));
    push_u32(static_cast<std::uint32_t>(height));
    push_u32(static_cast<std::uint32_t>(max_steps));
    push_u32(static_cast<std::uint32_t>(view_radius));
    push_u32(static_cast<std::uint32_t>(action_count()));
    return io::fnv1a64(buf);
}

std::vector<std::uint8_t> Observation::canonical_bytes() const {
    std::vector<std::uint8_t> bytes = cells;
    bytes.push_back(carried ? 1 : 0);
    return bytes;
}

std::uint64_t Observation::hash() const {
    const auto bytes = canonical_bytes();
    return io::fnv1a64(bytes);
}

Observation egocentric_window(const std::vector<std::uint8_t>& grid, int grid_w, int grid_h,
                              int row, int col, Heading heading, int radius, bool carried) {
    const int w = 2 * radius + 1;
    Observation obs;
    obs.width = w;
    obs.carried = carried;
    obs.cells.resize(static_cast<std::size_t>(w) * w);
    const int h = static_cast<int>(heading);
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
            const int fwd = radius - i;   // cells ahead of the agent
            const int right = j - radius; // cells to the agent's right
            const int r = row + fwd * kForwardRow[h] + right * kRightRow[h];
            const int c = col + fwd * kForwardCol[h] + right * kRightCol[h];
            std::uint8_t code = static_cast<std::uint8_t>(Cell::out_of_bounds);
            if (r >= 0 && r < grid_h && c >= 0 && c < grid_w) {
                code = grid[static_cast<std::size_t>(r) * grid_w + c];
            }
            obs.cells[static_cast<std::size_t>(i) * w + j] = code;
        }
    }
    return obs;
}

Env::Env(const EnvSpec& spec) : spec_(spec) {
    if (spec_.width < 3 || spec_.height < 3) throw SpecError("grid must be at least 3x3");
    if (spec_.max_steps < 1) throw SpecError("max_steps must be >= 1");
    if (spec_.view_radius < 1) throw SpecError("view_radius must be >= 1");
    width_ = spec_.width;
    height_ = spec_.height;
    base_.assign(static_cast<std::size_t>(width_) * height_, kWall);

    Rng rng(mix_seed(spec_.seed, 0x6c61796f7574ULL));  // "layout"
    generate_layout(rng);
    place_entities(rng);
    plan_expert();
}

bool Env::walkable(int row, int col) const {
    return in_bounds(row, col) && base_[static_cast<std::size_t>(cell_index(row, col))] == kFloor;
}

bool Env::position_free(const GridPos& p) const {
    if (!walkable(p.row, p.col)) return false;
    if (spec_.task == Task::pick_place) {
        if (!state_.carrying && p == state_.yellow) return false;
        if (p == state_.red) return false;
    }
    return true;
}

GridPos Env::ahead(const GridPos& p, Heading h) const {
    return {p.row + kForwardRow[static_cast<int>(h)], p.col + kForwardCol[static_cast<int>(h)]};
}

void Env::generate_layout(Rng& rng) {
    auto carve = [this](int row, int col) {
        base_[static_cast<std::size_t>(cell_index(row, col))] = kFloor;
    };
    auto carve_rect = [&](int r0, int c0, int h, int w) {
        for (int r = r0; r < r0 + h; ++r)
            for (int c = c0; c < c0 + w; ++c) carve(r, c);
    };

    switch (spec_.task) {
        case Task::hallway:
            carve_rect(1, 1, 1, width_ - 2);
            break;
        case Task::one_room:
        case Task::pick_place:
            carve_rect(1, 1, height_ - 2, width_ - 2);
            break;
        case Task::four_rooms: {
            carve_rect(1, 1, height_ - 2, width_ - 2);
            const int mr = height_ / 2;
            const int mc = width_ / 2;
            for (int c = 1; c < width_ - 1; ++c)
                base_[static_cast<std::size_t>(cell_index(mr, c))] = kWall;
            for (int r = 1; r < height_ - 1; ++r)
                base_[static_cast<std::size_t>(cell_index(r, mc))] = kWall;
            carve(mr, (1 + mc) / 2);
            carve(mr, (mc + width_ - 1) / 2);
            carve((1 + mr) / 2, mc);
            carve((mr + height_ - 1) / 2, mc);
            break;
        }
        case Task::t_maze: {
            const int stem_col = width_ / 2;
            for (int c = 1; c < width_ - 1; ++c) carve(1, c);
            for (int r = 1; r < height_ - 1; ++r) carve(r, stem_col);
            break;
        }
        case Task::maze_s3: {
            // Three non-touching rooms, then L-shaped corridors between
            // consecutive room centers. Carving guarantees connectivity.
            struct Room {
                int r0, c0, h, w;
            };
            std::vector<Room> rooms;
            for (int k = 0; k < 3; ++k) {
                bool placed = false;
                for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                    const int rh = 3 + static_cast<int>(rng.below(3));
                    const int rw = 3 + static_cast<int>(rng.below(3));
                    const int r0 = 1 + static_cast<int>(rng.below(height_ - 1 - rh));
                    const int c0 = 1 + static_cast<int>(rng.below(width_ - 1 - rw));
                    bool overlaps = false;
                    for (const Room& other : rooms) {
                        const bool sep = r0 + rh + 1 <= other.r0 || other.r0 + other.h + 1 <= r0 ||
                                         c0 + rw + 1 <= other.c0 || other.c0 + other.w + 1 <= c0;
                        if (!sep) overlaps = true;
                    }
                    if (!overlaps) {
                        rooms.push_back({r0, c0, rh, rw});
                        placed = true;
                    }
                }
                if (!placed) {
                    // Deterministic fallback spots that always fit a 15x15 canvas.
                    static constexpr int kFallback[3][2] = {{1, 1}, {1, 10}, {10, 10}};
                    rooms.push_back({kFallback[k][0], kFallback[k][1], 3, 3});
                }
            }
            for (const Room& room : rooms) carve_rect(room.r0, room.c0, room.h, room.w);
            for (int k = 0; k + 1 < 3; ++k) {
                const int ra = rooms[k].r0 + rooms[k].h / 2;
                const int ca = rooms[k].c0 + rooms[k].w / 2;
                const int rb = rooms[k + 1].r0 + rooms[k + 1].h / 2;
                const int cb = rooms[k + 1].c0 + rooms[k + 1].w / 2;
                for (int c = std::min(ca, cb); c <= std::max(ca, cb); ++c) carve(ra, c);
                for (int r = std::min(ra, rb); r <= std::max(ra, rb); ++r) carve(r, cb);
            }
            break;
        }
    }
}

void Env::place_entities(Rng& rng) {
    std::vector<GridPos> floor_cells;
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < width_; ++c)
            if (walkable(r, c)) floor_cells.push_back({r, c});
    if (floor_cells.size() < 2) throw SpecError("layout has fewer than 2 floor cells");

    auto pick_cell = [&]() { return floor_cells[rng.below(floor_cells.size())]; };

    state_ = EnvState{};
    if (spec_.task == Task::t_maze) {
        // Goal on a random branch end; agent at the stem bottom facing up.
        const bool left = rng.below(2) == 0;
        state_.goal = left ? GridPos{1, 1} : GridPos{1, width_ - 2};
        state_.agent = {height_ - 2, width_ / 2};
        state_.heading = Heading::north;
    } else if (spec_.task == Task::pick_place) {
        state_.yellow = pick_cell();
        do {
            state_.red = pick_cell();
        } while (state_.red == state_.yellow || adjacent4(state_.red, state_.yellow));
        do {
            state_.agent = pick_cell();
        } while (state_.agent == state_.yellow || state_.agent == state_.red);
        state_.heading = static_cast<Heading>(rng.below(4));
    } else {
        state_.goal = pick_cell();
        do {
            state_.agent = pick_cell();
        } while (state_.agent == state_.goal);
        state_.heading = static_cast<Heading>(rng.below(4));
    }
}

std::vector<int> Env::reverse_bfs(const std::vector<std::uint8_t>& goal_states,
                                  const std::vector<std::uint8_t>& blocked,
                                  bool allow_back) const {
    const std::size_t n_states = static_cast<std::size_t>(width_) * height_ * 4;
    std::vector<int> dist(n_states, -1);
    std::deque<int> queue;
    for (std::size_t s = 0; s < n_states; ++s) {
        if (goal_states[s]) {
            dist[s] = 0;
            queue.push_back(static_cast<int>(s));
        }
    }
    auto free_cell = [&](int r, int c) {
        return in_bounds(r, c) && base_[static_cast<std::size_t>(cell_index(r, c))] == kFloor &&
               !blocked[static_cast<std::size_t>(cell_index(r, c))];
    };
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        const int h = s % 4;
        const int cell = s / 4;
        const int row = cell / width_;
        const int col = cell % width_;
        const int d = dist[static_cast<std::size_t>(s)];
        auto relax = [&](int state) {
            if (dist[static_cast<std::size_t>(state)] < 0) {
                dist[static_cast<std::size_t>(state)] = d + 1;
                queue.push_back(state);
            }
        };
        // Turn predecessors: left/right from the neighbor heading lands here.
        relax(cell * 4 + (h + 1) % 4);
        relax(cell * 4 + (h + 3) % 4);
        // Forward predecessor: the cell one step behind this heading.
        {
            const int pr = row - kForwardRow[h];
            const int pc = col - kForwardCol[h];
            if (free_cell(pr, pc)) relax(state_index(pr, pc, static_cast<Heading>(h)));
        }
        if (allow_back) {
            const int pr = row + kForwardRow[h];
            const int pc = col + kForwardCol[h];
            if (free_cell(pr, pc)) relax(state_index(pr, pc, static_cast<Heading>(h)));
        }
    }
    return dist;
}

void Env::plan_expert() {
    const std::size_t n_cells = static_cast<std::size_t>(width_) * height_;
    const std::size_t n_states = n_cells * 4;
    std::vector<std::uint8_t> blocked(n_cells, 0);
    std::vector<std::uint8_t> goals(n_states, 0);

    if (spec_.task != Task::pick_place) {
        for (int h = 0; h < 4; ++h) {
            goals[static_cast<std::size_t>(state_index(state_.goal.row, state_.goal.col,
                                                       static_cast<Heading>(h)))] = 1;
        }
        dist_nav_ = reverse_bfs(goals, blocked, /*allow_back=*/false);
        const int d = distance_at(dist_nav_, state_.agent, state_.heading);
        if (d < 0) throw SpecError("generated layout: goal unreachable from spawn");
        expert_path_length_ = d;
        return;
    }

    plan_pick_phase();

    // Phase 2: carrying, only the red block obstructs; face a floor cell
    // 4-adjacent to the red block.
    std::vector<std::uint8_t> blocked2(n_cells, 0);
    blocked2[static_cast<std::size_t>(cell_index(state_.red.row, state_.red.col))] = 1;
    std::vector<std::uint8_t> goals2(n_states, 0);
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            if (!walkable(r, c) || blocked2[static_cast<std::size_t>(cell_index(r, c))]) continue;
            for (int h = 0; h < 4; ++h) {
                const GridPos front{r + kForwardRow[h], c + kForwardCol[h]};
                if (walkable(front.row, front.col) && !(front == state_.red) &&
                    adjacent4(front, state_.red)) {
                    goals2[static_cast<std::size_t>(state_index(r, c, static_cast<Heading>(h)))] = 1;
                }
            }
        }
    }
    dist_drop_ = reverse_bfs(goals2, blocked2, /*allow_back=*/true);

    if (distance_at(dist_pick_, state_.agent, state_.heading) < 0) {
        throw SpecError("generated layout: yellow block unreachable from spawn");
    }

    // Measure the scripted demonstrator end to end on a scratch copy.
    Env probe(*this);
    int steps = 0;
    while (!probe.state_.terminated && steps <= spec_.max_steps) {
        probe.step(probe.expert_action());
        ++steps;
    }
    if (!probe.state_.success) throw SpecError("generated layout: demonstrator cannot finish");
    expert_path_length_ = steps;
}

int Env::distance_at(const std::vector<int>& dist, const GridPos& p, Heading h) const {
    return dist[static_cast<std::size_t>(state_index(p.row, p.col, h))];
}

const std::vector<int>& Env::current_phase_distances() const {
    if (spec_.task != Task::pick_place) return dist_nav_;
    if (state_.carrying) return dist_drop_;
    return dist_pick_;
}

std::vector<int> Env::expert_optimal_actions() const {
    if (state_.terminated) throw UsageError("expert_action on terminated episode");
    const bool pp = spec_.task == Task::pick_place;

    if (pp && !state_.carrying && !(state_.yellow == planned_yellow_)) {
        // Some agent moved the block since planning (never the demonstrator
        // itself); the pick distances are stale.
        plan_pick_phase();
    }

    const std::vector<int>& dist = current_phase_distances();
    const int d = distance_at(dist, state_.agent, state_.heading);
    if (d < 0) throw ExpertError("objective unreachable");
    if (d == 0) {
        return {state_.carrying ? kActionDrop : (pp ? kActionPickUp : kActionForward)};
    }

    std::vector<int> actions;
    auto consider = [&](int action, const GridPos& pos, Heading h, bool moved) {
        if (moved && !position_free(pos)) return;
        if (distance_at(dist, pos, h) == d - 1) actions.push_back(action);
    };
    consider(kActionForward, ahead(state_.agent, state_.heading), state_.heading, true);
    consider(kActionLeft, state_.agent, turn_left(state_.heading), false);
    consider(kActionRight, state_.agent, turn_right(state_.heading), false);
    if (pp) {
        const int h = static_cast<int>(state_.heading);
        consider(kActionBack,
                 {state_.agent.row - kForwardRow[h], state_.agent.col - kForwardCol[h]},
                 state_.heading, true);
    }
    if (actions.empty()) throw ExpertError("no optimal action found");
    return actions;
}

void Env::plan_pick_phase() const {
    const std::size_t n_cells = static_cast<std::size_t>(width_) * height_;
    std::vector<std::uint8_t> blocked(n_cells, 0);
    blocked[static_cast<std::size_t>(cell_index(state_.yellow.row, state_.yellow.col))] = 1;
    blocked[static_cast<std::size_t>(cell_index(state_.red.row, state_.red.col))] = 1;
    std::vector<std::uint8_t> goals(n_cells * 4, 0);
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            if (!walkable(r, c) || blocked[static_cast<std::size_t>(cell_index(r, c))]) continue;
            for (int h = 0; h < 4; ++h) {
                const GridPos front{r + kForwardRow[h], c + kForwardCol[h]};
                if (front == state_.yellow) {
                    goals[static_cast<std::size_t>(state_index(r, c, static_cast<Heading>(h)))] = 1;
                }
            }
        }
    }
    dist_pick_ = reverse_bfs(goals, blocked, /*allow_back=*/true);
    planned_yellow_ = state_.yellow;
}

int Env::expert_action() const {
    const std::vector<int> actions = expert_optimal_actions();
    static constexpr std::array<int, 4> kPreference = {kActionForward, kActionLeft, kActionRight,
                                                       kActionBack};
    for (int pref : kPreference) {
        if (std::find(actions.begin(), actions.end(), pref) != actions.end()) return pref;
    }
    return actions.front();  // pick / drop
}

Observation Env::observe() const {
    return egocentric_window(painted_grid(), width_, height_, state_.agent.row, state_.agent.col,
                             state_.heading, spec_.view_radius, state_.carrying);
}

std::vector<std::uint8_t> Env::painted_grid() const {
    std::vector<std::uint8_t> grid = base_;
    if (spec_.task == Task::pick_place) {
        if (!state_.carrying) {
            grid[static_cast<std::size_t>(cell_index(state_.yellow.row, state_.yellow.col))] =
                static_cast<std::uint8_t>(Cell::yellow_block);
        }
        grid[static_cast<std::size_t>(cell_index(state_.red.row, state_.red.col))] =
            static_cast<std::uint8_t>(Cell::red_block);
    } else {
        grid[static_cast<std::size_t>(cell_index(state_.goal.row, state_.goal.col))] =
            static_cast<std::uint8_t>(Cell::goal);
    }
    return grid;
}

StepResult Env::step(int action) {
    if (state_.terminated) throw UsageError("step after episode end");
    if (action < 0 || action >= spec_.action_count()) {
        throw DomainError("action " + std::to_string(action) + " out of range");
    }

    state_.t += 1;
    switch (action) {
        case kActionLeft:
            state_.heading = turn_left(state_.heading);
            break;
        case kActionRight:
            state_.heading = turn_right(state_.heading);
            break;
        case kActionForward: {
            const GridPos target = ahead(state_.agent, state_.heading);
            if (position_free(target)) state_.agent = target;
            break;
        }
        case kActionBack: {
            const int h = static_cast<int>(state_.heading);
            const GridPos target{state_.agent.row - kForwardRow[h],
                                 state_.agent.col - kForwardCol[h]};
            if (position_free(target)) state_.agent = target;
            break;
        }
        case kActionPickUp: {
            const GridPos front = ahead(state_.agent, state_.heading);
            if (!state_.carrying && front == state_.yellow) {
                state_.carrying = true;
                state_.yellow = {-1, -1};
            }
            break;
        }
        case kActionDrop: {
            const GridPos front = ahead(state_.agent, state_.heading);
            if (state_.carrying && walkable(front.row, front.col) && !(front == state_.red)) {
                state_.carrying = false;
                state_.yellow = front;
            }
            break;
        }
    }

    bool success = false;
    if (spec_.task == Task::pick_place) {
        success = !state_.carrying && state_.yellow.row >= 0 && adjacent4(state_.yellow, state_.red);
    } else {
        success = state_.agent == state_.goal;
    }

    StepResult result;
    if (success) {
        state_.terminated = true;
        state_.success = true;
        result.reward = 1.0 - 0.2 * static_cast<double>(state_.t) /
                                  static_cast<double>(spec_.max_steps);
    } else if (state_.t >= spec_.max_steps) {
        state_.terminated = true;
        result.reward = 0.0;
    }
    result.done = state_.terminated;
    result.success = state_.success;
    result.observation = observe();
    return result;
}

std::string Env::render_ascii() const {
    const std::vector<std::uint8_t> grid = painted_grid();
    static constexpr char kChars[] = {'#', '.', 'G', 'Y', 'R', '?'};
    static constexpr char kAgent[] = {'^', '>', 'v', '<'};
    std::string out;
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            if (GridPos{r, c} == state_.agent) {
                out.push_back(kAgent[static_cast<int>(state_.heading)]);
            } else {
                out.push_back(kChars[grid[static_cast<std::size_t>(cell_index(r, c))]]);
            }
        }
        out.push_back('\n');
    }
    return out;
}

int bfs_cell_distance(const Env& env, GridPos from, GridPos to) {
    if (!env.walkable(from.row, from.col) || !env.walkable(to.row, to.col)) return -1;
    const int w = env.grid_width();
    const int h = env.grid_height();
    std::vector<int> dist(static_cast<std::size_t>(w) * h, -1);
    std::deque<GridPos> queue;
    dist[static_cast<std::size_t>(from.row) * w + from.col] = 0;
    queue.push_back(from);
    while (!queue.empty()) {
        const GridPos p = queue.front();
        queue.pop_front();
        if (p == to) return dist[static_cast<std::size_t>(p.row) * w + p.col];
        static constexpr int dr[4] = {-1, 1, 0, 0};
        static constexpr int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            const int nr = p.row + dr[k];
            const int nc = p.col + dc[k];
            if (!env.walkable(nr, nc)) continue;
            auto& d = dist[static_cast<std::size_t>(nr) * w + nc];
            if (d < 0) {
                d = dist[static_cast<std::size_t>(p.row) * w + p.col] + 1;
                queue.push_back({nr, nc});
            }
        }
    }
    return -1;
}

}  // namespace boa
