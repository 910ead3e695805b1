/*
 * Copyright (C) 2026 The SUME Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sume/wall/geometry.hpp"

namespace sume::wall {

class WallError : public std::runtime_error {
public:
    enum class Kind { UnknownWindow, InvalidArgument, ZTaken };

    WallError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// What a window shows. Slides are painted as a solid background with
/// title and body blocks; anything else shows a test card.
struct WindowContent {
    enum class Type { TestCard, Slide };

    Type type = Type::TestCard;
    std::string deck_title;
    int slide_index = 0;  // 1-based
    int slide_count = 0;
    int layout = 0;
    std::string title;
    std::string body;
    Rgb background{255, 255, 255};

    friend bool operator==(const WindowContent&, const WindowContent&) = default;
};

enum class WindowKind { Normal, Slideshow };

std::string_view kind_name(WindowKind kind);

/// A chromeless region of the wall. There is no title bar, border or
/// panel: the rect is exactly the pixels the content occupies.
struct Window {
    std::uint32_t id = 0;
    Rect rect;
    std::int32_t z = 0;
    bool visible = true;
    WindowKind kind = WindowKind::Normal;
    WindowContent content;

    friend bool operator==(const Window&, const Window&) = default;
};

struct VisibleRegion {
    std::uint32_t window_id = 0;
    Rect local;  // screen-relative

    friend bool operator==(const VisibleRegion&, const VisibleRegion&) = default;
};

/// Immutable picture of the wall at one revision.
struct SceneSnapshot {
    WallConfig config;
    std::uint64_t revision = 0;
    /// Ascending z.
    std::vector<Window> windows;
    /// Indexed by screen; the unoccluded on-canvas parts of every window.
    std::vector<std::vector<VisibleRegion>> screens;

    const Window* find(std::uint32_t id) const;
    /// Unoccluded on-canvas area of a window, summed over screens.
    std::int64_t visible_area(std::uint32_t id) const;

    friend bool operator==(const SceneSnapshot&, const SceneSnapshot&) = default;
};

/// Canonical JSON with sorted keys.
std::string scene_to_json(const SceneSnapshot& scene);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    Rgb at(int x, int y) const {
        auto i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    /// Binary PPM (P6).
    std::vector<std::uint8_t> to_ppm() const;
    static Image from_ppm(const std::vector<std::uint8_t>& bytes);
};

/// Paints one screen, lowest z first. Throws WallError for a bad index.
Image export_raster(const SceneSnapshot& scene, int screen);

/// Content colour at window-local pixel (u, v) for a window of size w x h.
Rgb content_pixel(const WindowContent& content, std::int64_t w, std::int64_t h, std::int64_t u, std::int64_t v);

/// Writes `<dir>/rev-<N>/screen-<i>.ppm` and `<dir>/rev-<N>/scene.json`;
/// returns the revision directory.
std::filesystem::path write_snapshot_dir(const SceneSnapshot& scene, const std::filesystem::path& dir);

/// Reads {"rows", "cols", "screenWidth", "screenHeight", "background"}.
/// Throws std::invalid_argument.
WallConfig parse_wall_config(std::string_view json_text);
WallConfig load_wall_config(const std::filesystem::path& path);

/// The wall's single writer. Every mutation, including ones that leave the
/// state unchanged, advances the revision by one and notifies listeners
/// after the lock is released.
class WallModel {
public:
    /// Throws std::invalid_argument for an invalid config.
    explicit WallModel(WallConfig config);

    const WallConfig& config() const { return config_; }
    std::uint64_t revision() const;

    /// New windows go on top of the stack. Throws WallError for negative size.
    std::uint32_t place_window(const Rect& rect, WindowContent content, WindowKind kind = WindowKind::Normal);

    void set_rect(std::uint32_t id, const Rect& rect);
    void set_x(std::uint32_t id, std::int64_t x);
    void set_y(std::uint32_t id, std::int64_t y);
    void set_width(std::uint32_t id, std::int64_t width);
    void set_height(std::uint32_t id, std::int64_t height);
    /// Throws WallError::ZTaken when another window already uses `z`.
    void set_z(std::uint32_t id, std::int32_t z);
    void set_visible(std::uint32_t id, bool visible);
    void set_content(std::uint32_t id, WindowContent content);
    void close(std::uint32_t id);

    bool contains(std::uint32_t id) const;
    std::optional<Window> window(std::uint32_t id) const;
    std::size_t window_count() const;

    SceneSnapshot render() const;

    using Listener = std::function<void(std::uint64_t revision)>;
    int add_listener(Listener listener);
    void remove_listener(int token);

private:
    template <typename Fn>
    void mutate(std::uint32_t id, Fn&& fn);
    void notify(std::uint64_t revision);

    WallConfig config_;
    mutable std::mutex mu_;
    std::uint64_t revision_ = 0;
    std::uint32_t next_id_ = 1;
    std::map<std::uint32_t, Window> windows_;

    std::mutex listeners_mu_;
    int next_listener_ = 1;
    std::map<int, Listener> listeners_;
};

}  // namespace sume::wall
