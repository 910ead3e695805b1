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

#include <cmath>
#include <optional>

#include "sume/presenter/presenter.hpp"
#include "sume/typelib/typelib.hpp"
#include "sume/wall/base64.hpp"

namespace sume::presenter {

using orb::app_fault;
using orb::CallArgs;
using orb::Component;
using orb::Reply;
using orb::WireValue;

class ApplicationImpl;
class PresentationsImpl;
class PresentationImpl;
class SlideShowWindowImpl;

namespace {

std::string unknown_window(std::uint32_t id) { return "unknown window " + std::to_string(id); }

// R4 geometry to whole pixels, half away from zero.
std::int64_t to_pixels(float v, const char* what, bool allow_negative) {
    if (!std::isfinite(v) || std::fabs(v) > 1e9f) app_fault(std::string(what) + " out of range");
    if (!allow_negative && v < 0) app_fault(std::string(what) + " must not be negative");
    return std::lround(v);
}

}  // namespace

class SlideImpl : public Component {
public:
    SlideImpl(std::weak_ptr<PresentationImpl> owner, SlideSpec spec);
    const SlideSpec& spec() const { return spec_; }

private:
    std::weak_ptr<PresentationImpl> owner_;
    SlideSpec spec_;
};

class SlidesImpl : public Component {
public:
    explicit SlidesImpl(std::weak_ptr<PresentationImpl> owner);

private:
    std::weak_ptr<PresentationImpl> owner_;
};

class SlideShowSettingsImpl : public Component {
public:
    explicit SlideShowSettingsImpl(std::weak_ptr<PresentationImpl> owner);

private:
    std::weak_ptr<PresentationImpl> owner_;
};

class SlideShowViewImpl : public Component {
public:
    SlideShowViewImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<PresentationImpl> owner,
                      std::uint32_t window_id);

    std::uint32_t window_id() const { return window_id_; }
    int current() const { return current_; }
    void set_window(std::weak_ptr<SlideShowWindowImpl> window) { window_ = std::move(window); }

    /// Faults for an index outside 1..Count.
    void go_to(int index);
    void next();
    void previous();
    void refresh();
    void exit();

private:
    int slide_count() const;
    void show(int index);

    std::shared_ptr<PresenterHost> host_;
    std::weak_ptr<PresentationImpl> owner_;
    std::weak_ptr<SlideShowWindowImpl> window_;
    std::uint32_t window_id_;
    int current_ = 1;
};

class SlideShowWindowImpl : public Component {
public:
    SlideShowWindowImpl(std::shared_ptr<PresenterHost> host, std::shared_ptr<SlideShowViewImpl> view);

private:
    wall::Rect rect() const;

    std::shared_ptr<PresenterHost> host_;
    std::shared_ptr<SlideShowViewImpl> view_;
};

class PresentationImpl : public Component {
public:
    static std::shared_ptr<PresentationImpl> create(std::shared_ptr<PresenterHost> host,
                                                    std::weak_ptr<ApplicationImpl> app, std::string name, Deck deck);

    PresentationImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<ApplicationImpl> app, std::string name,
                     std::string title);

    int slide_count() const { return static_cast<int>(slides_.size()); }
    std::shared_ptr<SlideImpl> slide(int index) const;
    int index_of(const SlideImpl* slide) const;
    std::shared_ptr<SlideImpl> add_slide(int index, int layout);
    wall::WindowContent content(int index) const;

    void refresh();
    void open_window();
    std::shared_ptr<SlideShowWindowImpl> run_show();
    void forget_show(const SlideShowViewImpl* view);
    void apply_visibility(bool visible);
    void close();

private:
    std::shared_ptr<PresentationImpl> self() { return std::static_pointer_cast<PresentationImpl>(shared_from_this()); }
    bool app_visible() const;
    void close_normal(std::uint32_t id);

    std::shared_ptr<PresenterHost> host_;
    std::weak_ptr<ApplicationImpl> app_;
    std::string name_;
    std::string title_;
    std::vector<std::shared_ptr<SlideImpl>> slides_;
    std::shared_ptr<SlidesImpl> slides_collection_;
    std::shared_ptr<SlideShowSettingsImpl> settings_;
    std::vector<std::uint32_t> normal_windows_;
    std::vector<std::shared_ptr<SlideShowViewImpl>> shows_;
};

class PresentationsImpl : public Component {
public:
    PresentationsImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<ApplicationImpl> app);

    const std::vector<std::shared_ptr<PresentationImpl>>& items() const { return items_; }
    void remove(const PresentationImpl* p);

private:
    std::shared_ptr<PresenterHost> host_;
    std::weak_ptr<ApplicationImpl> app_;
    std::vector<std::shared_ptr<PresentationImpl>> items_;
};

class ApplicationImpl : public Component {
public:
    static std::shared_ptr<ApplicationImpl> create(std::shared_ptr<PresenterHost> host);
    explicit ApplicationImpl(std::shared_ptr<PresenterHost> host);

    bool visible() const { return visible_ == 1; }
    PresentationsImpl& presentations() { return *presentations_; }
    void quit();
    void on_final_release() override { quit(); }

private:
    std::shared_ptr<PresenterHost> host_;
    std::shared_ptr<PresentationsImpl> presentations_;
    std::int32_t window_state_ = 1;
    std::int32_t visible_ = 0;
    bool quit_ = false;
};

class WallControlImpl : public Component {
public:
    static std::shared_ptr<WallControlImpl> create(std::shared_ptr<PresenterHost> host);
    explicit WallControlImpl(std::shared_ptr<PresenterHost> host);
    ~WallControlImpl() override { detach(); }

    void on_final_release() override { detach(); }

private:
    void detach();
    std::shared_ptr<SlideShowViewImpl> show(std::uint32_t id) const;
    void require_window(std::uint32_t id) const;

    std::shared_ptr<PresenterHost> host_;
    std::optional<wall::SceneSnapshot> captured_;
    int revision_token_ = 0;
    int slide_token_ = 0;
};

// Slide

SlideImpl::SlideImpl(std::weak_ptr<PresentationImpl> owner, SlideSpec spec)
    : Component("Slide"), owner_(std::move(owner)), spec_(std::move(spec)) {
    bind("get_SlideIndex", [this](const CallArgs&) -> Reply {
        auto p = owner_.lock();
        return WireValue::i4(p ? p->index_of(this) : 0);
    });
    bind("get_Layout", [this](const CallArgs&) -> Reply { return WireValue::i4(spec_.layout); });
    bind("get_Title", [this](const CallArgs&) -> Reply { return WireValue::string(spec_.title); });
    bind("set_Title", [this](const CallArgs& a) -> Reply {
        spec_.title = a.str(0);
        if (auto p = owner_.lock()) p->refresh();
        return {};
    });
    bind("get_Body", [this](const CallArgs&) -> Reply { return WireValue::string(spec_.body); });
    bind("set_Body", [this](const CallArgs& a) -> Reply {
        spec_.body = a.str(0);
        if (auto p = owner_.lock()) p->refresh();
        return {};
    });
}

// Slides

SlidesImpl::SlidesImpl(std::weak_ptr<PresentationImpl> owner) : Component("Slides"), owner_(std::move(owner)) {
    bind("Add", [this](const CallArgs& a) -> Reply { return owner_.lock()->add_slide(a.i4(0), a.i4(1)); });
    bind("Item", [this](const CallArgs& a) -> Reply { return owner_.lock()->slide(a.i4(0)); });
    bind("get_Count", [this](const CallArgs&) -> Reply { return WireValue::i4(owner_.lock()->slide_count()); });
}

// SlideShowSettings

SlideShowSettingsImpl::SlideShowSettingsImpl(std::weak_ptr<PresentationImpl> owner)
    : Component("SlideShowSettings"), owner_(std::move(owner)) {
    bind("Run", [this](const CallArgs&) -> Reply { return owner_.lock()->run_show(); });
}

// SlideShowView

SlideShowViewImpl::SlideShowViewImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<PresentationImpl> owner,
                                     std::uint32_t window_id)
    : Component("SlideShowView"), host_(std::move(host)), owner_(std::move(owner)), window_id_(window_id) {
    bind("Next", [this](const CallArgs&) -> Reply {
        next();
        return {};
    });
    bind("Previous", [this](const CallArgs&) -> Reply {
        previous();
        return {};
    });
    bind("GotoSlide", [this](const CallArgs& a) -> Reply {
        go_to(a.i4(0));
        return {};
    });
    bind("get_CurrentSlideIndex", [this](const CallArgs&) -> Reply { return WireValue::i4(current_); });
    bind("Exit", [this](const CallArgs&) -> Reply {
        exit();
        return {};
    });
}

int SlideShowViewImpl::slide_count() const {
    auto p = owner_.lock();
    return p ? p->slide_count() : 0;
}

void SlideShowViewImpl::show(int index) {
    if (index == current_) return;
    current_ = index;
    refresh();
    raise("SlideChanged", {WireValue::i4(index)});
    host_->notify_slide(window_id_, index);
}

void SlideShowViewImpl::go_to(int index) {
    if (index < 1 || index > slide_count()) app_fault("index out of range");
    show(index);
}

void SlideShowViewImpl::next() { show(std::min(current_ + 1, std::max(slide_count(), 1))); }

void SlideShowViewImpl::previous() { show(std::max(current_ - 1, 1)); }

void SlideShowViewImpl::refresh() {
    auto p = owner_.lock();
    if (!p || !host_->wall().contains(window_id_)) return;
    host_->wall().set_content(window_id_, p->content(current_));
}

void SlideShowViewImpl::exit() {
    if (!alive()) return;
    auto keep = shared_from_this();
    retire();
    if (auto w = window_.lock()) w->retire();
    host_->unregister_window(window_id_);
    if (host_->wall().contains(window_id_)) host_->wall().close(window_id_);
    if (auto p = owner_.lock()) p->forget_show(this);
}

// SlideShowWindow

SlideShowWindowImpl::SlideShowWindowImpl(std::shared_ptr<PresenterHost> host, std::shared_ptr<SlideShowViewImpl> view)
    : Component("SlideShowWindow"), host_(std::move(host)), view_(std::move(view)) {
    bind("get_Width", [this](const CallArgs&) -> Reply { return WireValue::r4(static_cast<float>(rect().width)); });
    bind("set_Width", [this](const CallArgs& a) -> Reply {
        host_->wall().set_width(view_->window_id(), to_pixels(a.r4(0), "Width", false));
        return {};
    });
    bind("get_Height", [this](const CallArgs&) -> Reply { return WireValue::r4(static_cast<float>(rect().height)); });
    bind("set_Height", [this](const CallArgs& a) -> Reply {
        host_->wall().set_height(view_->window_id(), to_pixels(a.r4(0), "Height", false));
        return {};
    });
    bind("get_Left", [this](const CallArgs&) -> Reply { return WireValue::r4(static_cast<float>(rect().x)); });
    bind("set_Left", [this](const CallArgs& a) -> Reply {
        host_->wall().set_x(view_->window_id(), to_pixels(a.r4(0), "Left", true));
        return {};
    });
    bind("get_Top", [this](const CallArgs&) -> Reply { return WireValue::r4(static_cast<float>(rect().y)); });
    bind("set_Top", [this](const CallArgs& a) -> Reply {
        host_->wall().set_y(view_->window_id(), to_pixels(a.r4(0), "Top", true));
        return {};
    });
    bind("get_View", [this](const CallArgs&) -> Reply { return view_; });
    bind("get_WindowId", [this](const CallArgs&) -> Reply {
        return WireValue::i4(static_cast<std::int32_t>(view_->window_id()));
    });
}

wall::Rect SlideShowWindowImpl::rect() const {
    auto w = host_->wall().window(view_->window_id());
    if (!w) app_fault(unknown_window(view_->window_id()));
    return w->rect;
}

// Presentation

std::shared_ptr<PresentationImpl> PresentationImpl::create(std::shared_ptr<PresenterHost> host,
                                                           std::weak_ptr<ApplicationImpl> app, std::string name,
                                                           Deck deck) {
    auto p = std::make_shared<PresentationImpl>(std::move(host), std::move(app), std::move(name),
                                                std::move(deck.title));
    for (auto& spec : deck.slides) p->slides_.push_back(std::make_shared<SlideImpl>(p, std::move(spec)));
    p->slides_collection_ = std::make_shared<SlidesImpl>(p);
    p->settings_ = std::make_shared<SlideShowSettingsImpl>(p);
    return p;
}

PresentationImpl::PresentationImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<ApplicationImpl> app,
                                   std::string name, std::string title)
    : Component("Presentation"),
      host_(std::move(host)),
      app_(std::move(app)),
      name_(std::move(name)),
      title_(std::move(title)) {
    bind("get_SlideShowSettings", [this](const CallArgs&) -> Reply { return settings_; });
    bind("get_Slides", [this](const CallArgs&) -> Reply { return slides_collection_; });
    bind("get_Name", [this](const CallArgs&) -> Reply { return WireValue::string(name_); });
    bind("Close", [this](const CallArgs&) -> Reply {
        close();
        return {};
    });
}

std::shared_ptr<SlideImpl> PresentationImpl::slide(int index) const {
    if (index < 1 || index > slide_count()) app_fault("index out of range");
    return slides_[static_cast<std::size_t>(index - 1)];
}

int PresentationImpl::index_of(const SlideImpl* slide) const {
    for (std::size_t i = 0; i < slides_.size(); ++i) {
        if (slides_[i].get() == slide) return static_cast<int>(i + 1);
    }
    return 0;
}

std::shared_ptr<SlideImpl> PresentationImpl::add_slide(int index, int layout) {
    if (index < 1 || index > slide_count() + 1) app_fault("index out of range");
    if (!is_known_layout(layout)) app_fault("unknown layout " + std::to_string(layout));
    SlideSpec spec;
    spec.layout = layout;
    spec.background = default_background(layout);
    auto s = std::make_shared<SlideImpl>(self(), std::move(spec));
    slides_.insert(slides_.begin() + (index - 1), s);
    refresh();
    return s;
}

wall::WindowContent PresentationImpl::content(int index) const {
    wall::WindowContent c;
    c.type = wall::WindowContent::Type::Slide;
    c.deck_title = title_;
    c.slide_count = slide_count();
    if (index >= 1 && index <= slide_count()) {
        const SlideSpec& s = slides_[static_cast<std::size_t>(index - 1)]->spec();
        c.slide_index = index;
        c.layout = s.layout;
        c.title = s.title;
        c.body = s.body;
        c.background = s.background;
    } else {
        c.layout = kLayoutBlank;
    }
    return c;
}

bool PresentationImpl::app_visible() const {
    auto app = app_.lock();
    return app && app->visible();
}

void PresentationImpl::refresh() {
    for (auto id : normal_windows_) {
        if (host_->wall().contains(id)) host_->wall().set_content(id, content(slide_count() > 0 ? 1 : 0));
    }
    for (const auto& v : shows_) v->refresh();
}

void PresentationImpl::open_window() {
    const auto& cfg = host_->wall().config();
    auto id = host_->wall().place_window({0, 0, cfg.screen_width, cfg.screen_height},
                                         content(slide_count() > 0 ? 1 : 0), wall::WindowKind::Normal);
    if (!app_visible()) host_->wall().set_visible(id, false);
    normal_windows_.push_back(id);
    std::weak_ptr<PresentationImpl> weak = self();
    host_->register_window(id, {{}, [weak, id] {
                                   if (auto p = weak.lock()) p->close_normal(id);
                               }});
}

void PresentationImpl::close_normal(std::uint32_t id) {
    std::erase(normal_windows_, id);
    host_->unregister_window(id);
    if (host_->wall().contains(id)) host_->wall().close(id);
}

std::shared_ptr<SlideShowWindowImpl> PresentationImpl::run_show() {
    if (slide_count() == 0) app_fault("no slides");
    const auto& cfg = host_->wall().config();
    auto id = host_->wall().place_window({0, 0, cfg.screen_width, cfg.screen_height}, content(1),
                                         wall::WindowKind::Slideshow);
    if (!app_visible()) host_->wall().set_visible(id, false);
    auto view = std::make_shared<SlideShowViewImpl>(host_, self(), id);
    auto window = std::make_shared<SlideShowWindowImpl>(host_, view);
    view->set_window(window);
    shows_.push_back(view);
    std::weak_ptr<SlideShowViewImpl> weak = view;
    host_->register_window(id, {weak, [weak] {
                                   if (auto v = weak.lock()) v->exit();
                               }});
    return window;
}

void PresentationImpl::forget_show(const SlideShowViewImpl* view) {
    std::erase_if(shows_, [view](const auto& v) { return v.get() == view; });
}

void PresentationImpl::apply_visibility(bool visible) {
    for (auto id : normal_windows_) host_->wall().set_visible(id, visible);
    for (const auto& v : shows_) host_->wall().set_visible(v->window_id(), visible);
}

void PresentationImpl::close() {
    if (!alive()) return;
    auto keep = shared_from_this();
    retire();
    for (auto& v : std::vector(shows_)) v->exit();
    for (auto id : std::vector(normal_windows_)) close_normal(id);
    for (auto& s : slides_) s->retire();
    slides_collection_->retire();
    settings_->retire();
    if (auto app = app_.lock()) app->presentations().remove(this);
}

// Presentations

PresentationsImpl::PresentationsImpl(std::shared_ptr<PresenterHost> host, std::weak_ptr<ApplicationImpl> app)
    : Component("Presentations"), host_(std::move(host)), app_(std::move(app)) {
    bind("Open", [this](const CallArgs& a) -> Reply {
        const std::string& file = a.str(0);
        auto path = host_->resolve(file);
        if (!path) app_fault("file not found: " + file);
        Deck deck;
        try {
            deck = load_deck(*path);
        } catch (const DeckError& e) {
            app_fault("cannot open " + file + ": " + e.what());
        }
        // readOnly and untitled are accepted for compatibility and ignored.
        auto p = PresentationImpl::create(host_, app_, path->filename().string(), std::move(deck));
        items_.push_back(p);
        if (a.i4(3) != 0) p->open_window();
        return p;
    });
    bind("Item", [this](const CallArgs& a) -> Reply {
        int index = a.i4(0);
        if (index < 1 || index > static_cast<int>(items_.size())) app_fault("index out of range");
        return items_[static_cast<std::size_t>(index - 1)];
    });
    bind("get_Count", [this](const CallArgs&) -> Reply { return WireValue::i4(static_cast<std::int32_t>(items_.size())); });
}

void PresentationsImpl::remove(const PresentationImpl* p) {
    std::erase_if(items_, [p](const auto& item) { return item.get() == p; });
}

// Application

std::shared_ptr<ApplicationImpl> ApplicationImpl::create(std::shared_ptr<PresenterHost> host) {
    auto app = std::make_shared<ApplicationImpl>(host);
    app->presentations_ = std::make_shared<PresentationsImpl>(std::move(host), app);
    return app;
}

ApplicationImpl::ApplicationImpl(std::shared_ptr<PresenterHost> host)
    : Component("Application"), host_(std::move(host)) {
    bind("get_WindowState", [this](const CallArgs&) -> Reply { return WireValue::i4(window_state_); });
    bind("set_WindowState", [this](const CallArgs& a) -> Reply {
        int v = a.i4(0);
        if (v < 1 || v > 3) app_fault("WindowState must be 1, 2 or 3");
        // Minimizing the application leaves slideshow windows on the wall.
        window_state_ = v;
        return {};
    });
    bind("get_Visible", [this](const CallArgs&) -> Reply { return WireValue::i4(visible_); });
    bind("set_Visible", [this](const CallArgs& a) -> Reply {
        int v = a.i4(0);
        if (v != 0 && v != 1) app_fault("Visible must be 0 or 1");
        visible_ = v;
        for (const auto& p : presentations_->items()) p->apply_visibility(v == 1);
        return {};
    });
    bind("get_Presentations", [this](const CallArgs&) -> Reply { return presentations_; });
    bind("Quit", [this](const CallArgs&) -> Reply {
        quit();
        return {};
    });
}

void ApplicationImpl::quit() {
    if (quit_) return;
    quit_ = true;
    auto keep = shared_from_this();
    for (const auto& p : std::vector(presentations_->items())) p->close();
    presentations_->retire();
    retire();
}

// Wall

std::shared_ptr<WallControlImpl> WallControlImpl::create(std::shared_ptr<PresenterHost> host) {
    auto w = std::make_shared<WallControlImpl>(host);
    std::weak_ptr<WallControlImpl> weak = w;
    w->revision_token_ = host->wall().add_listener([weak](std::uint64_t rev) {
        if (auto self = weak.lock()) self->raise("RevisionChanged", {WireValue::i4(static_cast<std::int32_t>(rev))});
    });
    w->slide_token_ = host->add_slide_listener([weak](std::uint32_t window, int index) {
        if (auto self = weak.lock()) {
            self->raise("SlideChanged", {WireValue::i4(static_cast<std::int32_t>(window)), WireValue::i4(index)});
        }
    });
    return w;
}

WallControlImpl::WallControlImpl(std::shared_ptr<PresenterHost> host) : Component("Wall"), host_(std::move(host)) {
    auto id_arg = [](const CallArgs& a, std::size_t i) { return static_cast<std::uint32_t>(a.i4(i)); };
    bind("get_Revision", [this](const CallArgs&) -> Reply {
        return WireValue::i4(static_cast<std::int32_t>(host_->wall().revision()));
    });
    bind("Snapshot", [this](const CallArgs&) -> Reply { return WireValue::string(wall::scene_to_json(host_->wall().render())); });
    bind("Capture", [this](const CallArgs&) -> Reply {
        captured_ = host_->wall().render();
        return WireValue::string(wall::scene_to_json(*captured_));
    });
    bind("ExportScreen", [this](const CallArgs& a) -> Reply {
        int screen = a.i4(0);
        const auto& cfg = host_->wall().config();
        if (screen < 0 || screen >= cfg.screen_count()) app_fault("unknown screen " + std::to_string(screen));
        auto scene = captured_ ? *captured_ : host_->wall().render();
        return WireValue::string(wall::base64_encode(wall::export_raster(scene, screen).to_ppm()));
    });
    bind("ListDecks", [this](const CallArgs&) -> Reply { return WireValue::string(host_->list_decks()); });
    bind("SetWindowRect", [this, id_arg](const CallArgs& a) -> Reply {
        host_->wall().set_rect(id_arg(a, 0), {a.i4(1), a.i4(2), a.i4(3), a.i4(4)});
        return {};
    });
    bind("SetWindowZ", [this, id_arg](const CallArgs& a) -> Reply {
        host_->wall().set_z(id_arg(a, 0), a.i4(1));
        return {};
    });
    bind("NextSlide", [this, id_arg](const CallArgs& a) -> Reply {
        show(id_arg(a, 0))->next();
        return {};
    });
    bind("PreviousSlide", [this, id_arg](const CallArgs& a) -> Reply {
        show(id_arg(a, 0))->previous();
        return {};
    });
    bind("GotoSlide", [this, id_arg](const CallArgs& a) -> Reply {
        show(id_arg(a, 0))->go_to(a.i4(1));
        return {};
    });
    bind("GetSlideIndex", [this, id_arg](const CallArgs& a) -> Reply {
        return WireValue::i4(show(id_arg(a, 0))->current());
    });
    bind("CloseWindow", [this, id_arg](const CallArgs& a) -> Reply {
        require_window(id_arg(a, 0));
        host_->close_window(id_arg(a, 0));
        return {};
    });
}

void WallControlImpl::detach() {
    if (revision_token_) host_->wall().remove_listener(revision_token_);
    if (slide_token_) host_->remove_slide_listener(slide_token_);
    revision_token_ = slide_token_ = 0;
}

void WallControlImpl::require_window(std::uint32_t id) const {
    if (!host_->wall().contains(id)) app_fault(unknown_window(id));
}

std::shared_ptr<SlideShowViewImpl> WallControlImpl::show(std::uint32_t id) const {
    require_window(id);
    auto view = host_->find_show(id);
    if (!view) app_fault("window " + std::to_string(id) + " is not a slideshow");
    return view;
}

std::shared_ptr<orb::Registry> make_presenter_registry(std::shared_ptr<PresenterHost> host) {
    auto parsed = typelib::parse_idl(presenter_idl());
    if (!parsed.ok()) throw orb::RegistryError("presenter.sidl: " + parsed.diagnostics.front().to_string());
    auto registry = std::make_shared<orb::Registry>(orb::Registry::from_library(*parsed.library));
    registry->bind_factory("Presenter.Application", [host] { return ApplicationImpl::create(host); });
    registry->bind_factory("Presenter.Wall", [host] { return WallControlImpl::create(host); });
    registry->seal();
    return registry;
}

}  // namespace sume::presenter
