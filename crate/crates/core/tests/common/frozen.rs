// Generated by tests/oracles/generate_frozen.py (mpmath, 50 digits). Do not edit by hand.
#![allow(dead_code, clippy::excessive_precision)]

/// (x, Γ(x))
pub const GAMMA: &[(f64, f64)] = &[
    (0.001, 999.4237724845954661),
    (0.1, 9.513507698668731836),
    (0.5, 1.772453850905516027),
    (1.5, 0.8862269254527580136),
    (2.5, 1.329340388179137020),
    (3.7, 4.170651783796603165),
    (10.3, 716430.6890623752445),
    (25.25, 1.382154913837396909e+24),
    (50.5, 4.290462912351959811e+63),
    (99.99, 8.913035245169174118e+155),
    (140.1, 1.575632858549533383e+239),
    (170.5, 5.562092414559999611e+305),
    (-0.5, -3.544907701811032055),
    (-1.5, 2.363271801207354703),
    (-2.3, -1.447107394255917264),
    (-7.75, 0.0001874782417004247223),
];

/// (x, ln|Γ(x)|)
pub const LN_GAMMA: &[(f64, f64)] = &[
    (0.001, 6.907178885383853683),
    (0.75, 0.2032809514312953715),
    (3.3, 0.9870985778947345879),
    (12.5, 18.73434751193644570),
    (171.3, 708.1149470389968243),
    (1000.5, 5908.674175848677489),
    (1.0e5, 1051287.708973656895),
    (-3.5, -1.309006684993042046),
];

/// (ν, x, J_ν(x)) from the ascending series summed at 50 digits.
pub const BESSEL_J: &[(f64, f64, f64)] = &[
    (-0.5, 0.05, 3.563788851169038312),
    (-0.5, 0.7, 0.7293951585245627819),
    (-0.5, 1.0, 0.4310988680183760795),
    (-0.5, 1.99, -0.2302201670149936636),
    (-0.5, 2.0, -0.2347857104062484692),
    (-0.5, 2.01, -0.2393065267342119198),
    (-0.5, 3.5, -0.3993868253630490277),
    (-0.5, 7.25, 0.1682912021461046348),
    (-0.5, 12.0, 0.1943644038335345256),
    (-0.5, 19.5, 0.1437920449343772772),
    (-0.5, 33.3, -0.04261077814641935005),
    (-0.5, 50.0, 0.1088847563505395431),
    (-0.5, 77.7, -0.06042902737882195985),
    (-0.5, 100.0, 0.06880309146872808375),
    (-0.25, 0.05, 2.050544525903636815),
    (-0.25, 0.7, 0.8936460709466949754),
    (-0.25, 1.0, 0.6693848172615744515),
    (-0.25, 1.99, 0.009303651401980010880),
    (-0.25, 2.0, 0.003586915624172916078),
    (-0.25, 2.01, -0.002101659826704414272),
    (-0.25, 3.5, -0.4242480045031011056),
    (-0.25, 7.25, 0.2506414858326486282),
    (-0.25, 12.0, 0.1307599313113257734),
    (-0.25, 19.5, 0.1749143791484481161),
    (-0.25, 33.3, 0.01135721204592054934),
    (-0.25, 50.0, 0.08913552241812879768),
    (-0.25, 77.7, -0.02993619537525311947),
    (-0.25, 100.0, 0.04804461995730860698),
    (0.0, 0.05, 0.9993750976494685809),
    (0.0, 0.7, 0.8812008886074052808),
    (0.0, 1.0, 0.7651976865579665514),
    (0.0, 1.99, 0.2296611840455894309),
    (0.0, 2.0, 0.2238907791412356681),
    (0.0, 2.01, 0.2181268213258487835),
    (0.0, 3.5, -0.3801277399872633774),
    (0.0, 7.25, 0.2919969241917789975),
    (0.0, 12.0, 0.04768931079683353662),
    (0.0, 19.5, 0.1788538270401728930),
    (0.0, 33.3, 0.06333848594752089964),
    (0.0, 50.0, 0.05581232766925181500),
    (0.0, 77.7, 0.005068664664996050749),
    (0.0, 100.0, 0.01998585030422312242),
    (0.3333, 0.05, 0.3273304424788885259),
    (0.3333, 0.7, 0.7185829254839279766),
    (0.3333, 1.0, 0.7308862454018949521),
    (0.3333, 1.99, 0.4474744747795200761),
    (0.3333, 2.0, 0.4429231112588952275),
    (0.3333, 2.01, 0.4383514933621758193),
    (0.3333, 3.5, -0.2405831364629660331),
    (0.3333, 7.25, 0.2780175415609077915),
    (0.3333, 12.0, -0.07031008605024002407),
    (0.3333, 19.5, 0.1424987579449563926),
    (0.3333, 33.3, 0.1161756608532096501),
    (0.3333, 50.0, -0.0005663838520998451146),
    (0.3333, 77.7, 0.04951866281247650229),
    (0.3333, 100.0, -0.02126722685545959404),
    (0.5, 0.05, 0.1783380824021974229),
    (0.5, 0.7, 0.6143610667912650832),
    (0.5, 1.0, 0.6713967071418030904),
    (0.5, 1.99, 0.5166315012173878388),
    (0.5, 2.0, 0.5130161365618277517),
    (0.5, 2.01, 0.5093708287403710018),
    (0.5, 3.5, -0.1496045696495265727),
    (0.5, 7.25, 0.2439009943707851157),
    (0.5, 12.0, -0.1235885359559419438),
    (0.5, 19.5, 0.1094121365631443383),
    (0.5, 33.3, 0.1315371904355037560),
    (0.5, 50.0, -0.02960583188892461257),
    (0.5, 77.7, 0.06739167095216605131),
    (0.5, 100.0, -0.04040213271625212374),
    (1.0, 0.05, 0.02499218831375969913),
    (1.0, 0.7, 0.3289957415400589478),
    (1.0, 1.0, 0.4400505857449335160),
    (1.0, 1.99, 0.5773494940468115357),
    (1.0, 2.0, 0.5767248077568733872),
    (1.0, 2.01, 0.5760600909547547527),
    (1.0, 3.5, 0.1373775273623271857),
    (1.0, 7.25, 0.06858170065313174453),
    (1.0, 12.0, -0.2234471044906276124),
    (1.0, 19.5, -0.02087707014809752225),
    (1.0, 33.3, 0.1238621479014802600),
    (1.0, 50.0, -0.09751182812517513766),
    (1.0, 77.7, 0.09040839677718482096),
    (1.0, 100.0, -0.07714535201411215803),
    (2.5, 0.05, 0.00002973009241140529929),
    (2.5, 0.7, 0.02105396886631329994),
    (2.5, 1.0, 0.04949681022847794227),
    (2.5, 1.99, 0.2218116948462660305),
    (2.5, 2.0, 0.2239245314689157658),
    (2.5, 2.01, 0.2260393943799504956),
    (2.5, 3.5, 0.4552982804547049460),
    (2.5, 7.25, -0.2996181056871308082),
    (2.5, 12.0, 0.07242267383180952186),
    (2.5, 19.5, -0.1306707775071854631),
    (2.5, 33.3, -0.1273425198116061608),
    (2.5, 50.0, 0.02303721950962553044),
    (2.5, 77.7, -0.06502501616254025944),
    (2.5, 100.0, 0.03832591933237540559),
    (5.0, 0.05, 8.137173160673094507e-11),
    (5.0, 0.7, 0.00004288240705888549287),
    (5.0, 1.0, 0.0002497577302112344314),
    (5.0, 1.99, 0.006877095990402674472),
    (5.0, 2.0, 0.007039629755871685484),
    (5.0, 2.01, 0.007205039500029678256),
    (5.0, 3.5, 0.08044198664799178180),
    (5.0, 7.25, 0.3203580732712000964),
    (5.0, 12.0, -0.07347096310165858127),
    (5.0, 19.5, 0.08845321077928890143),
    (5.0, 33.3, 0.1383538305410695954),
    (5.0, 50.0, -0.08140024769656963964),
    (5.0, 77.7, 0.09011188027370268967),
    (5.0, 100.0, -0.07419573696451392083),
    (10.3, 0.05, 4.273135484402006878e-24),
    (10.3, 0.7, 2.698853523155904559e-12),
    (10.3, 1.0, 1.051387219585569329e-10),
    (10.3, 1.99, 1.178636369298532505e-7),
    (10.3, 2.0, 1.239983637486005802e-7),
    (10.3, 2.01, 1.304182217700253816e-7),
    (10.3, 3.5, 0.00003282809872979022440),
    (10.3, 7.25, 0.02294258850803734449),
    (10.3, 12.0, 0.2996564439254972815),
    (10.3, 19.5, 0.1106682369230224204),
    (10.3, 33.3, 0.08670164415881799159),
    (10.3, 50.0, -0.1021991552171810453),
    (10.3, 77.7, 0.01415864919512788184),
    (10.3, 100.0, -0.02462093131747747179),
    (15.0, 0.05, 7.121698018142586723e-37),
    (15.0, 0.7, 1.099500010457309038e-19),
    (15.0, 1.0, 2.297531532210344444e-17),
    (15.0, 1.99, 6.666913483936206819e-13),
    (15.0, 2.0, 7.183016356018792395e-13),
    (15.0, 2.01, 7.736145985663113140e-13),
    (15.0, 3.5, 2.789136099596137146e-9),
    (15.0, 7.25, 0.00008077030616444967467),
    (15.0, 12.0, 0.03161265436767477606),
    (15.0, 19.5, 0.07175786353955955095),
    (15.0, 33.3, 0.1439302080977900830),
    (15.0, 50.0, -0.1082255989751145520),
    (15.0, 77.7, -0.01586805918507813826),
    (15.0, 100.0, 0.01519812122392732252),
    (20.0, 0.05, 3.738200843297961448e-51),
    (20.0, 0.7, 3.109585837660066807e-28),
    (20.0, 1.0, 3.873503008524657719e-25),
    (20.0, 1.99, 3.546831858204804054e-19),
    (20.0, 2.0, 3.918972805090753839e-19),
    (20.0, 2.01, 4.327984613362181564e-19),
    (20.0, 3.5, 2.576855310280759080e-14),
    (20.0, 7.25, 3.343998679003676967e-8),
    (20.0, 12.0, 0.0002512132702453995320),
    (20.0, 19.5, 0.1376697061195610918),
    (20.0, 33.3, 0.08135063007280184201),
    (20.0, 50.0, -0.1167043527595797373),
    (20.0, 77.7, -0.05270185975422753659),
    (20.0, 100.0, 0.06221745849833875314),
];

/// (α, β, z_re, z_im, Re E, Im E) two-parameter Mittag-Leffler by direct summation.
pub const ML_TWO: &[(f64, f64, f64, f64, f64, f64)] = &[
    (0.5, 1.0, -1.0, 0.0, 0.4275835761558070044, 0.0),
    (0.7, 1.0, -2.0, 0.0, 0.2137867270152972652, 0.0),
    (1.5, 1.0, -1.0, 0.0, 0.3966293653180880845, 0.0),
    (2.0, 1.0, -1.5, 0.0, 0.3391859889869472253, 0.0),
    (0.9, 1.3, 1.2, 0.0, 3.285183149251752405, 0.0),
    (0.6, 0.8, 0.5, 0.5, 1.121620984531723563, 1.197093198425270575),
    (1.2, 2.2, -3.0, 1.0, 0.3268316326879849300, 0.09090981597051512074),
    (0.3, 1.0, -0.8, 0.0, 0.5143819586882442664, 0.0),
    (1.8, 1.7, -6.0, 0.0, 0.02778815783689249747, 0.0),
    (0.25, 0.5, 0.4, -0.3, 0.8084295592925448539, -0.6292601314825021968),
];

/// (a, b, z, E) multivariate Mittag-Leffler by brute-force shell summation.
pub struct MlMultiCase { pub a: &'static [f64], pub b: f64, pub z: &'static [(f64, f64)], pub value: (f64, f64) }
pub const ML_MULTI: &[MlMultiCase] = &[
    MlMultiCase { a: &[0.5, 1.2], b: 1.3, z: &[(-0.4, 0.0), (0.3, 0.0)], value: (0.9429060251951052913, 0.0) },
    MlMultiCase { a: &[1.5, 0.7, 1.0], b: 2.0, z: &[(0.2, 0.0), (-0.5, 0.0), (0.1, 0.0)], value: (0.8212757243892387140, 0.0) },
    MlMultiCase { a: &[0.9, 1.9], b: 1.0, z: &[(-1.2, 0.3), (0.4, -0.2)], value: (0.4045745071233074304, 0.05093188811068327660) },
    MlMultiCase { a: &[0.3, 0.6], b: 2.5, z: &[(0.6, 0.0), (-0.7, 0.0)], value: (0.7904834032829133078, 0.0) },
    MlMultiCase { a: &[1.0, 1.0], b: 1.0, z: &[(0.3, 0.0), (0.5, 0.0)], value: (2.225540928492467605, 0.0) },
];

/// (α, β, γ, λ, z, E^λ_{α,β,γ}(z)) Kilbas-Saigo functions by direct product-form summation.
pub const KILBAS_SAIGO: &[(f64, f64, f64, f64, f64, f64)] = &[
    (1.5, 3.0, 1.5, 1.5, -0.25, 0.9619983023280906774),
    (1.0, 3.0, 2.5, 1.5, -1.0, 0.8691822368336925488),
    (1.0, 3.0, 1.5, 1.5, -2.0, 0.6165693621999285062),
    (0.8, 1.2, 0.3, 0.9, 0.7, 1.869891763865775385),
    (1.0, 2.5, 1.25, 1.25, -1.5, 0.5826015877239427465),
    (1.0, 3.8, 2.9, 1.9, -0.8, 0.9512186989029012999),
    (2.0, 1.0, 0.5, 2.0, 3.0, 1.580586563566668024),
];
