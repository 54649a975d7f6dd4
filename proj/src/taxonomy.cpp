#include "eifsim/taxonomy.hpp"

#include <stdexcept>
#include <unordered_map>

namespace eifsim {

const char* to_string(RoomLabel r) {
    switch (r) {
        case RoomLabel::Kitchen: return "kitchen";
        case RoomLabel::Bedroom: return "bedroom";
        case RoomLabel::Livingroom: return "livingroom";
        case RoomLabel::Bathroom: return "bathroom";
    }
    return "kitchen";
}

bool room_label_from_string(const std::string& s, RoomLabel& out) {
    if (s == "kitchen") out = RoomLabel::Kitchen;
    else if (s == "bedroom") out = RoomLabel::Bedroom;
    else if (s == "livingroom") out = RoomLabel::Livingroom;
    else if (s == "bathroom") out = RoomLabel::Bathroom;
    else return false;
    return true;
}

namespace {

constexpr std::uint8_t K = 0;  // kitchen
constexpr std::uint8_t B = 1;  // bedroom
constexpr std::uint8_t L = 2;  // livingroom
constexpr std::uint8_t T = 3;  // bathroom
constexpr std::uint8_t N = kRoomNeutral;

// Index = CategoryId - 1. Append-only: ids are stable across releases
// because scene files and embeddings key off them.
const CategoryInfo kCategories[] = {
    // name            affordances                          height shelf room fp_w fp_h floor  block
    {"Wall",           0,                                    2.50f, 0.0f, N,   1, 1, true,  true},
    {"Fridge",         kReceptacle | kOpenable,              1.80f, 0.6f, K,   2, 2, true,  true},
    {"Microwave",      kReceptacle | kOpenable | kToggleable, 0.35f, 0.05f, K, 1, 1, false, false},
    {"CounterTop",     kReceptacle,                          0.90f, 0.0f, K,   1, 3, true,  true},
    {"Sink",           kReceptacle | kToggleable,            0.90f, 0.0f, K,   1, 2, true,  true},
    {"DiningTable",    kReceptacle,                          0.75f, 0.0f, K,   2, 3, true,  true},
    {"Cabinet",        kReceptacle | kOpenable,              0.90f, 0.3f, K,   1, 2, true,  true},
    {"Toaster",        kToggleable,                          0.25f, 0.0f, K,   1, 1, false, false},
    {"CoffeeMachine",  kToggleable,                          0.35f, 0.0f, K,   1, 1, false, false},
    {"GarbageCan",     kReceptacle,                          0.60f, 0.0f, K,   1, 1, true,  true},
    {"Tomato",         kPickupable | kSliceable,             0.08f, 0.0f, K,   1, 1, false, false},
    {"Lettuce",        kPickupable | kSliceable,             0.12f, 0.0f, K,   1, 1, false, false},
    {"Potato",         kPickupable | kSliceable,             0.07f, 0.0f, K,   1, 1, false, false},
    {"Egg",            kPickupable,                          0.05f, 0.0f, K,   1, 1, false, false},
    {"Apple",          kPickupable | kSliceable,             0.08f, 0.0f, K,   1, 1, false, false},
    {"Bread",          kPickupable | kSliceable,             0.10f, 0.0f, K,   1, 1, false, false},
    {"Onion",          kPickupable | kSliceable,             0.08f, 0.0f, K,   1, 1, false, false},
    {"Carrot",         kPickupable | kSliceable,             0.05f, 0.0f, K,   1, 1, false, false},
    {"Knife",          kPickupable,                          0.03f, 0.0f, K,   1, 1, false, false},
    {"Fork",           kPickupable,                          0.02f, 0.0f, K,   1, 1, false, false},
    {"Spoon",          kPickupable,                          0.02f, 0.0f, K,   1, 1, false, false},
    {"Spatula",        kPickupable,                          0.03f, 0.0f, K,   1, 1, false, false},
    {"Plate",          kPickupable | kReceptacle,            0.03f, 0.0f, K,   1, 1, false, false},
    {"Bowl",           kPickupable | kReceptacle,            0.10f, 0.0f, K,   1, 1, false, false},
    {"Mug",            kPickupable | kReceptacle,            0.10f, 0.0f, K,   1, 1, false, false},
    {"Cup",            kPickupable | kReceptacle,            0.10f, 0.0f, K,   1, 1, false, false},
    {"Pan",            kPickupable | kReceptacle,            0.08f, 0.0f, K,   1, 1, false, false},
    {"Pot",            kPickupable | kReceptacle,            0.15f, 0.0f, K,   1, 1, false, false},
    {"Kettle",         kPickupable,                          0.20f, 0.0f, K,   1, 1, false, false},
    {"Bottle",         kPickupable | kReceptacle,            0.25f, 0.0f, K,   1, 1, false, false},
    {"SaltShaker",     kPickupable,                          0.10f, 0.0f, K,   1, 1, false, false},
    {"PepperShaker",   kPickupable,                          0.10f, 0.0f, K,   1, 1, false, false},
    {"DishSponge",     kPickupable,                          0.03f, 0.0f, K,   1, 1, false, false},
    {"SoapBottle",     kPickupable,                          0.20f, 0.0f, K,   1, 1, false, false},
    {"Sofa",           kReceptacle,                          0.80f, 0.0f, L,   2, 4, true,  true},
    {"CoffeeTable",    kReceptacle,                          0.45f, 0.0f, L,   2, 2, true,  true},
    {"TVStand",        kReceptacle,                          0.50f, 0.0f, L,   1, 3, true,  true},
    {"Television",     kToggleable,                          0.60f, 0.0f, L,   1, 1, false, false},
    {"Shelf",          kReceptacle,                          1.60f, 0.0f, L,   1, 2, true,  true},
    {"FloorLamp",      kToggleable,                          1.60f, 0.0f, L,   1, 1, true,  true},
    {"RemoteControl",  kPickupable,                          0.03f, 0.0f, L,   1, 1, false, false},
    {"Book",           kPickupable,                          0.04f, 0.0f, L,   1, 1, false, false},
    {"Laptop",         kPickupable | kOpenable | kToggleable, 0.05f, 0.0f, L,  1, 1, false, false},
    {"Newspaper",      kPickupable,                          0.02f, 0.0f, L,   1, 1, false, false},
    {"Vase",           kPickupable,                          0.25f, 0.0f, L,   1, 1, false, false},
    {"Statue",         kPickupable,                          0.30f, 0.0f, L,   1, 1, false, false},
    {"Pillow",         kPickupable,                          0.15f, 0.0f, L,   1, 1, false, false},
    {"CellPhone",      kPickupable,                          0.02f, 0.0f, N,   1, 1, false, false},
    {"CreditCard",     kPickupable,                          0.01f, 0.0f, N,   1, 1, false, false},
    {"KeyChain",       kPickupable,                          0.02f, 0.0f, N,   1, 1, false, false},
    {"Watch",          kPickupable,                          0.03f, 0.0f, N,   1, 1, false, false},
    {"Pen",            kPickupable,                          0.02f, 0.0f, N,   1, 1, false, false},
    {"Pencil",         kPickupable,                          0.02f, 0.0f, N,   1, 1, false, false},
    {"TissueBox",      kPickupable,                          0.12f, 0.0f, N,   1, 1, false, false},
    {"Candle",         kPickupable,                          0.15f, 0.0f, N,   1, 1, false, false},
    {"Bed",            kReceptacle,                          0.60f, 0.0f, B,   3, 4, true,  true},
    {"Dresser",        kReceptacle | kOpenable,              1.20f, 0.5f, B,   1, 2, true,  true},
    {"SideTable",      kReceptacle,                          0.60f, 0.0f, B,   1, 1, true,  true},
    {"DeskLamp",       kToggleable,                          0.45f, 0.0f, B,   1, 1, false, false},
    {"AlarmClock",     kPickupable,                          0.10f, 0.0f, B,   1, 1, false, false},
    {"Toilet",         kReceptacle,                          0.80f, 0.0f, T,   1, 1, true,  true},
    {"Bathtub",        kReceptacle,                          0.60f, 0.0f, T,   2, 4, true,  true},
    {"Towel",          kPickupable,                          0.05f, 0.0f, T,   1, 1, false, false},
    {"SoapBar",        kPickupable,                          0.04f, 0.0f, T,   1, 1, false, false},
    {"Plunger",        kPickupable,                          0.50f, 0.0f, T,   1, 1, false, false},
    {"SprayBottle",    kPickupable,                          0.25f, 0.0f, T,   1, 1, false, false},
    {"ToiletPaper",    kPickupable,                          0.12f, 0.0f, T,   1, 1, false, false},
    {"Cloth",          kPickupable,                          0.03f, 0.0f, T,   1, 1, false, false},
};

constexpr int kCategoryCount = static_cast<int>(sizeof(kCategories) / sizeof(kCategories[0]));

const std::unordered_map<std::string, CategoryId>& name_index() {
    static const std::unordered_map<std::string, CategoryId> index = [] {
        std::unordered_map<std::string, CategoryId> m;
        for (int i = 0; i < kCategoryCount; ++i) m.emplace(kCategories[i].name, i + 1);
        return m;
    }();
    return index;
}

}  // namespace

int category_count() { return kCategoryCount; }

const CategoryInfo& category_info(CategoryId id) {
    if (id < 1 || id > kCategoryCount)
        throw std::out_of_range("category id out of range: " + std::to_string(id));
    return kCategories[id - 1];
}

const char* category_name(CategoryId id) { return category_info(id).name; }

CategoryId category_id(const std::string& name) {
    auto it = name_index().find(name);
    return it == name_index().end() ? -1 : it->second;
}

std::vector<CategoryId> all_categories() {
    std::vector<CategoryId> ids;
    ids.reserve(kCategoryCount);
    for (int i = 1; i <= kCategoryCount; ++i) ids.push_back(i);
    return ids;
}

}  // namespace eifsim
