#pragma once

#include <array>

namespace pfexpm::detail {

// 1/k! for k = 0..70 as (hi, lo) double-double pairs, correctly rounded.
inline constexpr int kInvFactorialCount = 71;

inline constexpr std::array<std::array<double, 2>, kInvFactorialCount> kInvFactorial = {{
    {1.0, 0.0},  // 1/0!
    {1.0, 0.0},  // 1/1!
    {0.5, 0.0},  // 1/2!
    {0.16666666666666666, 9.25185853854297e-18},  // 1/3!
    {0.041666666666666664, 2.3129646346357427e-18},  // 1/4!
    {0.008333333333333333, 1.1564823173178714e-19},  // 1/5!
    {0.001388888888888889, -5.300543954373577e-20},  // 1/6!
    {0.0001984126984126984, 1.7209558293420705e-22},  // 1/7!
    {2.48015873015873e-05, 2.1511947866775882e-23},  // 1/8!
    {2.7557319223985893e-06, -1.858393274046472e-22},  // 1/9!
    {2.755731922398589e-07, 2.3767714622250297e-23},  // 1/10!
    {2.505210838544172e-08, -1.448814070935912e-24},  // 1/11!
    {2.08767569878681e-09, -1.20734505911326e-25},  // 1/12!
    {1.6059043836821613e-10, 1.2585294588752098e-26},  // 1/13!
    {1.1470745597729725e-11, 2.0655512752830745e-28},  // 1/14!
    {7.647163731819816e-13, 7.03872877733453e-30},  // 1/15!
    {4.779477332387385e-14, 4.399205485834081e-31},  // 1/16!
    {2.8114572543455206e-15, 1.6508842730861433e-31},  // 1/17!
    {1.5619206968586225e-16, 1.1910679660273754e-32},  // 1/18!
    {8.22063524662433e-18, 2.2141894119604265e-34},  // 1/19!
    {4.110317623312165e-19, 1.4412973378659527e-36},  // 1/20!
    {1.9572941063391263e-20, -1.3643503830087908e-36},  // 1/21!
    {8.896791392450574e-22, -7.911402614872376e-38},  // 1/22!
    {3.868170170630684e-23, -8.843177655482344e-40},  // 1/23!
    {1.6117375710961184e-24, -3.6846573564509766e-41},  // 1/24!
    {6.446950284384474e-26, -1.9330404233703465e-42},  // 1/25!
    {2.4795962632247976e-27, -1.2953730964765229e-43},  // 1/26!
    {9.183689863795546e-29, 1.4303150396787322e-45},  // 1/27!
    {3.279889237069838e-30, 1.5117542744029879e-46},  // 1/28!
    {1.1309962886447716e-31, 1.0498015412959506e-47},  // 1/29!
    {3.7699876288159054e-33, 2.5870347832750324e-49},  // 1/30!
    {1.216125041553518e-34, 5.586290567888806e-51},  // 1/31!
    {3.8003907548547434e-36, 1.7457158024652518e-52},  // 1/32!
    {1.151633562077195e-37, -6.09957445788454e-54},  // 1/33!
    {3.387157535521162e-39, 5.09056148151085e-56},  // 1/34!
    {9.67759295863189e-41, 3.202295548645562e-57},  // 1/35!
    {2.6882202662866363e-42, 5.355061165943334e-59},  // 1/36!
    {7.265460179153071e-44, -4.364097149354446e-61},  // 1/37!
    {1.911963205040282e-45, -2.7860822176883126e-62},  // 1/38!
    {4.902469756513544e-47, -1.213019100517928e-63},  // 1/39!
    {1.2256174391283858e-48, 6.033927348315605e-68},  // 1/40!
    {2.9893108271424046e-50, -1.0407247703033156e-66},  // 1/41!
    {7.117406731291439e-52, 3.1742075384205573e-68},  // 1/42!
    {1.6552108677421951e-53, 4.147105190494824e-70},  // 1/43!
    {3.7618428812322616e-55, 2.2597135911236184e-71},  // 1/44!
    {8.359650847182804e-57, -5.0402798850883064e-73},  // 1/45!
    {1.817315401561479e-58, 1.365069339879366e-74},  // 1/46!
    {3.866628513960594e-60, -1.564355005786389e-76},  // 1/47!
    {8.055476070751236e-62, 8.255818478070949e-78},  // 1/48!
    {1.643974708316579e-63, -4.080880981844294e-80},  // 1/49!
    {3.287949416633158e-65, 5.332251403646481e-82},  // 1/50!
    {6.446959640457172e-67, 2.8542499223476843e-83},  // 1/51!
    {1.2397999308571486e-68, -2.430377210051421e-85},  // 1/52!
    {2.3392451525606576e-70, 8.161871936085597e-87},  // 1/53!
    {4.331935467704922e-72, -1.0950890458548228e-88},  // 1/54!
    {7.876246304918039e-74, 2.578848742504751e-90},  // 1/55!
    {1.4064725544496498e-75, 1.1618077704898094e-91},  // 1/56!
    {2.4674957095607893e-77, -4.7567198485936506e-95},  // 1/57!
    {4.254302947518602e-79, 3.3126660495569664e-96},  // 1/58!
    {7.2106829618959365e-81, -4.675660659561278e-97},  // 1/59!
    {1.2017804936493226e-82, 6.837470842477656e-99},  // 1/60!
    {1.9701319568021682e-84, 8.210968879386911e-101},  // 1/61!
    {3.1776321883905942e-86, -1.5561627595804251e-102},  // 1/62!
    {5.043860616493007e-88, -3.178797157619149e-104},  // 1/63!
    {7.881032213270323e-90, -4.96687055877992e-106},  // 1/64!
    {1.2124664943492804e-91, 1.1469829506112378e-109},  // 1/65!
    {1.8370704459837581e-93, 4.044657877372749e-110},  // 1/66!
    {2.74189618803546e-95, -1.4319581694258744e-111},  // 1/67!
    {4.0322002765227353e-97, -8.828314531974743e-114},  // 1/68!
    {5.843768516699616e-99, 1.7807770368828202e-115},  // 1/69!
    {8.34824073814231e-101, -5.432421436016583e-117},  // 1/70!
}};

}  // namespace pfexpm::detail
