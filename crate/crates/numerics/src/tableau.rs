//! DOP853 tableau, error estimators and dense-output coefficients.
//! Each table is stored as a leading `f64` part plus a `_LO` correction so the
//! extended-precision backend sees the coefficients to about 30 digits.
#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

pub(crate) const C: [f64; 16] = [0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0, 1.0, 0.1, 0.2, 0.7777777777777778];
pub(crate) const C_LO: [f64; 16] = [0.0, 2.2355514829149388e-18, -3.58556667953482e-18, -5.37835001930203e-18, 1.0929465142427812e-17, 1.850371707708561e-17, 0.0, -1.7080354225002717e-17, -1.7649699365835873e-17, 2.2204460492503132e-17, 4.7580986769648707e-17, 0.0, 0.0, -5.551115123125783e-18, -1.1102230246251566e-17, -1.2335811384723739e-17];

pub(crate) const A: [[f64; 16]; 16] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259, 0.0, 0.0, 0.0, 0.0],
    [0.056167502283047954, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25350021021662483, -0.2462390374708025, -0.12419142326381637, 0.15329179827876568, 0.00820105229563469, 0.007567897660545699, -0.008298, 0.0, 0.0, 0.0],
    [0.03183464816350214, 0.0, 0.0, 0.0, 0.0, 0.028300909672366776, 0.053541988307438566, -0.05492374857139099, 0.0, 0.0, -0.00010834732869724932, 0.0003825710908356584, -0.00034046500868740456, 0.1413124436746325, 0.0, 0.0],
    [-0.42889630158379194, 0.0, 0.0, 0.0, 0.0, -4.697621415361164, 7.683421196062599, 4.06898981839711, 0.3567271874552811, 0.0, 0.0, 0.0, -0.0013990241651590145, 2.9475147891527724, -9.15095847217987, 0.0],
];
pub(crate) const A_LO: [[f64; 16]; 16] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.2355514829149388e-18, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-8.96391669883705e-19, -2.689175009651115e-18, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-1.3445875048255075e-18, 0.0, 2.905131389430606e-18, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-6.624152203916624e-18, 0.0, 7.016246096573124e-18, 1.0537371249772312e-17, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.055968564120623e-18, 0.0, 0.0, 8.175883949864783e-18, 8.271864563100202e-18, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -8.139510062367305e-18, 1.2006161584603762e-18, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.4253328451425882e-18, 0.0, 0.0, 1.2967148331612122e-17, 4.772385209399161e-18, 2.8475137341766893e-19, -3.660555130834814e-19, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.492689915630562e-17, 0.0, 0.0, 1.5456576283941173e-16, -3.718582587865727e-17, -1.2881343059163701e-15, -4.800642775601694e-16, 1.9413089553812176e-15, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.5724262912655348e-17, 0.0, 0.0, 7.616377660551361e-17, -2.1870450269554425e-17, 1.1824507909843185e-15, 1.6175344620758999e-16, 3.9439004961642045e-16, 7.661055475764465e-19, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-2.660163817828355e-17, 0.0, 0.0, -8.942575540409293e-17, 7.207295585396141e-17, 6.712606849485736e-16, -7.798463984469516e-16, -8.796132218075033e-16, 5.2481978128364214e-17, 1.3907396197551354e-16, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.7007512072370059e-16, 0.0, 0.0, -7.40073388060864e-16, -2.823131109979535e-17, 3.8189608367611925e-16, 1.1856623515433554e-16, -1.7007630722635992e-16, -2.2457366408213776e-16, -1.3158566470097505e-16, -4.213091915914117e-17, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-2.564525917607828e-18, 0.0, 0.0, 0.0, 0.0, -2.737092775581909e-16, 6.581122499260484e-17, 1.3317442893008373e-16, -1.0104455449341739e-17, 8.776696451848075e-18, 6.12257216002761e-18, 3.1043973515105385e-18, 0.0, 0.0, 0.0, 0.0],
    [-1.88644555359609e-18, 0.0, 0.0, 0.0, 0.0, 0.0, -2.1693122810297358e-17, 1.2121494224161007e-17, 6.293125460594507e-18, 1.3218335854066822e-17, -7.959644410071743e-19, 3.8130025355849374e-19, -1.794120407794253e-19, 0.0, 0.0, 0.0],
    [-1.9866654610511737e-18, 0.0, 0.0, 0.0, 0.0, -4.0327406802622954e-19, 1.2699877652684217e-18, 3.015077888147616e-18, 0.0, 0.0, -1.6268392119904694e-21, 2.070642294190223e-20, -4.8166271401306394e-21, 1.7199776914665478e-18, 0.0, 0.0],
    [1.5618605757625628e-17, 0.0, 0.0, 0.0, 0.0, 1.1142707166495955e-16, -5.92973577603934e-17, -1.8994109982627546e-16, 1.7527083212753864e-17, 0.0, 0.0, 0.0, -1.0435935893777387e-19, -9.080327027287263e-17, -4.3692612746328837e-16, 0.0],
];

pub(crate) const E3: [f64; 13] = [-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.42268232132379197, -0.1521609496625161, 0.20136540080403034, 0.022651792198360825, 0.0];
pub(crate) const E3_LO: [f64; 13] = [7.925770378062754e-18, 0.0, 0.0, 0.0, 0.0, -2.737092775581909e-16, 6.581122499260484e-17, 1.3317442893008373e-16, 2.2627811149171965e-18, 8.776696451848075e-18, 6.12257216002761e-18, 1.0635462033025066e-18, 0.0];

pub(crate) const E5: [f64; 13] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0];
pub(crate) const E5_LO: [f64; 13] = [6.877543760801164e-19, 0.0, 0.0, 0.0, 0.0, -8.518996614610585e-17, 1.150330848872384e-17, 8.89823354515909e-17, -1.693296289744891e-17, 3.4127098833665863e-18, 2.5584664710400534e-18, -1.5521986757531191e-18, 0.0];

pub(crate) const D: [[f64; 16]; 4] = [
    [-8.428938276109013, 0.0, 0.0, 0.0, 0.0, 0.5667149535193777, -3.0689499459498917, 2.38466765651207, 2.117034582445028, -0.871391583777973, 2.2404374302607883, 0.6315787787694688, -0.08899033645133331, 18.148505520854727, -9.194632392478356, -4.436036387594894],
    [10.427508642579134, 0.0, 0.0, 0.0, 0.0, 242.28349177525817, 165.20045171727028, -374.5467547226902, -22.113666853125306, 7.733432668472264, -30.674084731089398, -9.332130526430229, 15.697238121770845, -31.139403219565178, -9.35292435884448, 35.81684148639408],
    [19.985053242002433, 0.0, 0.0, 0.0, 0.0, -387.0373087493518, -189.17813819516758, 527.8081592054236, -11.57390253995963, 6.8812326946963, -1.0006050966910838, 0.7777137798053443, -2.778205752353508, -60.19669523126412, 84.32040550667716, 11.99229113618279],
    [-25.69393346270375, 0.0, 0.0, 0.0, 0.0, -154.18974869023643, -231.5293791760455, 357.6391179106141, 93.40532418362432, -37.45832313645163, 104.0996495089623, 29.8402934266605, -43.53345659001114, 96.32455395918828, -39.17726167561544, -149.72683625798564],
];
pub(crate) const D_LO: [[f64; 16]; 4] = [
    [6.07001772311276e-16, 0.0, 0.0, 0.0, 0.0, 4.085083132246998e-17, -1.3480870726737455e-17, -8.217286869152e-17, 2.086504301138e-16, -3.1344855853238036e-18, -6.705197588280659e-17, 4.4331899416815995e-17, -3.5435308668958646e-18, 6.873877271126774e-16, 5.533128061827524e-16, -3.6232834900443103e-16],
    [2.5756180718540317e-16, 0.0, 0.0, 0.0, 0.0, 1.2619950687919397e-14, -1.3399247147160801e-15, -7.145990220191793e-15, -2.5837691116326833e-16, -1.000846077165442e-17, -5.89065475830282e-16, 6.835214192289661e-16, -6.572034421526076e-16, 5.273923982966446e-16, 8.712970565344274e-16, 1.2580947935545244e-15],
    [8.826808429334292e-16, 0.0, 0.0, 0.0, 0.0, 1.4528391673698836e-14, 8.06767469151173e-15, 1.3720495297384635e-14, -7.608570167042261e-16, -2.6131419487549096e-16, -6.736550672641282e-17, 3.572781834715124e-17, -2.110530566458063e-16, 1.8248028942949262e-15, -5.929910464094051e-16, 2.6278928135977475e-17],
    [1.3333738395969295e-15, 0.0, 0.0, 0.0, 0.0, -5.9211399582358015e-15, -5.608383362985495e-16, 5.737366523638755e-15, -5.988439273072516e-15, -9.054105230765388e-16, -6.184417850693204e-16, 1.5710388591321508e-15, -2.325046131602548e-15, 4.052941400678487e-15, 1.4295794480996634e-15, 1.2853156972603791e-14],
];
