//! Geometry, materials, camera and lighting shared by every render pass.

pub mod bvh;
pub mod camera;
pub mod class;
pub mod environment;
pub mod fixtures;
pub mod instance;
pub mod material;
pub mod obj;
pub mod procedural;
pub mod subject;

pub use bvh::{BuildSummary, Bvh, Hit, Triangle, TriangleSoup};
pub use camera::{CameraPose, PhysicalCamera};
pub use class::{default_registry, ClassInfo, FeatureClass, CLASS_COUNT};
pub use environment::{EnvironmentMap, SkyFamily, Skybox, SkyboxSource, SunLight};
pub use instance::{DomainTag, SceneInstance, Side};
pub use material::{Material, MaterialKind};
pub use obj::{load_obj_subject, parse_obj, GroupMap};
pub use procedural::{build_procedural_subject, ProceduralParams};
pub use subject::{Mesh, PartGroup, SubjectModel};

/// Acceleration structure for `subject` placed by the scene's pose.
pub fn build_bvh(subject: &SubjectModel, scene: &SceneInstance) -> Bvh {
    Bvh::from_subject(subject, &scene.pose)
}
