use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scene::{DomainTag, SceneInstance, SubjectModel, CLASS_COUNT};

use super::image::{BeautyImage, ClassMask};
use super::{render_beauty, render_class_masks, RenderSettings};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub frame_index: u64,
    pub seed: u64,
    pub domain: DomainTag,
    pub config_digest: String,
    pub scene_digest: String,
    pub settings_digest: String,
    /// Per class: at least one mask pixel set.
    pub present: [bool; CLASS_COUNT],
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFrame {
    pub beauty: BeautyImage,
    pub masks: Vec<ClassMask>,
    pub provenance: Provenance,
}

pub fn render_labeled_frame(scene: &SceneInstance, subject: &SubjectModel, settings: &RenderSettings) -> Result<LabeledFrame> {
    let beauty = render_beauty(scene, subject, settings)?;
    let masks = render_class_masks(scene, subject, settings, settings.mask_mode)?;
    let mut present = [false; CLASS_COUNT];
    for (flag, mask) in present.iter_mut().zip(&masks) {
        *flag = mask.is_present();
    }
    Ok(LabeledFrame {
        beauty,
        masks,
        provenance: Provenance {
            frame_index: scene.frame_index,
            seed: scene.seed,
            domain: scene.domain,
            config_digest: scene.config_digest.clone(),
            scene_digest: scene.digest(),
            settings_digest: crate::digest::json_digest(settings),
            present,
        },
    })
}
